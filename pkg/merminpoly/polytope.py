"""
polytope.py
Exact H-representation polytopes {x : A.x >= b}: vertex enumeration (brute-force
active-set search and double description), vertex and edge tests through
active-set ranks, the polytope graph, facets and combinatorial isomorphism.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from .errors import EmptyPolytopeError, UnboundedPolytopeError
from .exactla import (
    ExactMatrix,
    Inequality,
    Vector,
    canonical_system,
    dot,
    feasible_point,
    integer_row,
    inverse,
    primitive_row,
    rank_of_rows,
    vector,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HPolytope:
    """{x : a.x >= b}."""

    a: ExactMatrix
    b: Vector

    def __post_init__(self):
        if len(self.b) != self.a.nrows:
            raise ValueError("b must have one entry per row of a")

    @classmethod
    def from_inequalities(cls, ineqs: Sequence[Tuple[Sequence, object]], dimension: Optional[int] = None,
                          row_labels=None, col_labels=None) -> "HPolytope":
        rows = [vector(a) for a, _ in ineqs]
        rhs = vector([b for _, b in ineqs])
        return cls(ExactMatrix.from_rows(rows, ncols=dimension, row_labels=row_labels, col_labels=col_labels), rhs)

    @property
    def dimension(self) -> int:
        return self.a.ncols

    @property
    def row_labels(self) -> Optional[Tuple[str, ...]]:
        return self.a.row_labels

    @property
    def nrows(self) -> int:
        return self.a.nrows

    def inequalities(self) -> List[Inequality]:
        return list(zip(self.a.rows, self.b))

    def active_set(self, x: Sequence[Fraction]) -> FrozenSet[int]:
        return frozenset(i for i, (row, b) in enumerate(zip(self.a.rows, self.b)) if dot(row, x) == b)

    def permuted_rows(self, order: Sequence[int]) -> "HPolytope":
        labels = [self.row_labels[i] for i in order] if self.row_labels else None
        return HPolytope.from_inequalities(
            [(self.a.rows[i], self.b[i]) for i in order], self.dimension, labels, self.a.col_labels
        )

    def scaled_rows(self, factors: Sequence[Fraction]) -> "HPolytope":
        if any(f <= 0 for f in factors):
            raise ValueError("row scaling factors must be positive")
        return HPolytope.from_inequalities(
            [(tuple(f * v for v in row), f * b) for row, b, f in zip(self.a.rows, self.b, factors)],
            self.dimension,
            self.row_labels,
            self.a.col_labels,
        )


@dataclass(frozen=True)
class VertexSet:
    vertices: Tuple[Vector, ...]
    active_sets: Tuple[FrozenSet[int], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def index(self, x: Sequence[Fraction]) -> int:
        return self.vertices.index(tuple(x))

    def as_set(self) -> set:
        return set(self.vertices)


def contains(p: HPolytope, x: Sequence[Fraction]) -> bool:
    return all(dot(row, x) >= b for row, b in zip(p.a.rows, p.b))


def _active_rank(p: HPolytope, active: Iterable[int]) -> int:
    return rank_of_rows([p.a.rows[i] for i in active], p.dimension)


def is_vertex(p: HPolytope, x: Sequence[Fraction]) -> bool:
    x = vector(x)
    if not contains(p, x):
        return False
    active = p.active_set(x)
    return len(active) >= p.dimension and _active_rank(p, active) == p.dimension


def _vertex_set(p: HPolytope, points: Iterable[Vector]) -> VertexSet:
    ordered = sorted(set(points))
    return VertexSet(tuple(ordered), tuple(p.active_set(v) for v in ordered))


def recession_direction(p: HPolytope) -> Optional[Vector]:
    """A nonzero y with A.y >= 0, or None when the recession cone is trivial."""
    d = p.dimension
    cone = [(row, Fraction(0)) for row in p.a.rows]
    for j in range(d):
        for sign in (1, -1):
            unit = tuple(Fraction(sign if k == j else 0) for k in range(d))
            y = feasible_point(cone + [(unit, Fraction(1))])
            if y is not None:
                return y
    return None


def _check_bounded(p: HPolytope) -> None:
    if feasible_point(p.inequalities()) is None:
        raise EmptyPolytopeError("the inequality system has no feasible point")
    ray = recession_direction(p)
    if ray is not None:
        raise UnboundedPolytopeError(f"recession direction {ray}")


# Brute-force active-set search ---------------------------------------------------


def _reduce(row: List[int], basis: List[List[int]], pivots: List[int], d: int) -> Optional[Tuple[List[int], int]]:
    r = row
    for brow, c in zip(basis, pivots):
        f = r[c]
        if f:
            piv = brow[c]
            r = primitive_row([piv * x - f * y for x, y in zip(r, brow)])
    lead = next((c for c in range(d) if r[c]), None)
    if lead is None:
        return None
    return r, lead


def _back_substitute(basis: List[List[int]], pivots: List[int], d: int) -> Vector:
    x = [Fraction(0)] * d
    for brow, c in zip(reversed(basis), reversed(pivots)):
        s = Fraction(brow[d]) - sum((brow[j] * x[j] for j in range(d) if j != c and brow[j]), Fraction(0))
        x[c] = s / brow[c]
    return tuple(x)


def _feasible_int(rows: List[List[int]], x: Vector, d: int) -> bool:
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    scaled = [int(v * den) for v in x]
    for row in rows:
        if sum(row[j] * scaled[j] for j in range(d)) < row[d] * den:
            return False
    return True


def _search_branch(rows: List[List[int]], d: int, first: int) -> List[Vector]:
    """All feasible basic solutions whose lowest chosen row is ``first``."""
    found: Dict[Vector, None] = {}
    n = len(rows)
    start = _reduce(list(rows[first]), [], [], d)
    if start is None:
        return []
    basis, pivots = [start[0]], [start[1]]

    def dfs(begin: int) -> None:
        if len(basis) == d:
            x = _back_substitute(basis, pivots, d)
            if _feasible_int(rows, x, d):
                found[x] = None
            return
        need = d - len(basis)
        for i in range(begin, n - need + 1):
            reduced = _reduce(list(rows[i]), basis, pivots, d)
            if reduced is None:
                continue
            basis.append(reduced[0])
            pivots.append(reduced[1])
            dfs(i + 1)
            basis.pop()
            pivots.pop()

    dfs(first + 1)
    return list(found)


def enumerate_vertices(p: HPolytope, workers: int = 1) -> VertexSet:
    """Reference enumeration over all d-subsets of linearly independent rows."""
    _check_bounded(p)
    d = p.dimension
    rows = [integer_row(tuple(a) + (b,)) for a, b in p.inequalities()]
    firsts = range(len(rows) - d + 1)
    points: Dict[Vector, None] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search_branch, rows, d, f) for f in firsts]
            for fut in futures:
                points.update(dict.fromkeys(fut.result()))
    else:
        for f in firsts:
            points.update(dict.fromkeys(_search_branch(rows, d, f)))
    if not points:
        raise EmptyPolytopeError("no basic feasible solution found")
    logger.info("brute-force enumeration: %d vertices in dimension %d", len(points), d)
    return _vertex_set(p, points)


# Double description --------------------------------------------------------------


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _int_dot(a: Sequence[int], r: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, r))


def enumerate_vertices_dd(p: HPolytope) -> VertexSet:
    """Double description on the homogenized cone {(x, t) : A.x - b.t >= 0, t >= 0}."""
    d = p.dimension
    dim = d + 1
    constraints = [tuple([0] * d + [1])]
    constraints += [tuple(integer_row(tuple(a) + (-b,))) for a, b in p.inequalities()]

    basis_idx: List[int] = []
    for i, row in enumerate(constraints):
        if rank_of_rows([constraints[j] for j in basis_idx] + [row], dim) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == dim:
                break
    if len(basis_idx) < dim:
        raise UnboundedPolytopeError("the constraint matrix has a nontrivial lineality space")

    binv = inverse(ExactMatrix.from_rows([constraints[i] for i in basis_idx], ncols=dim))
    rays: List[Tuple[Tuple[int, ...], int]] = []
    basis_mask = sum(1 << i for i in basis_idx)
    for k in range(dim):
        column = [binv.rows[r][k] for r in range(dim)]
        rays.append((tuple(primitive_row(integer_row(column))), basis_mask & ~(1 << basis_idx[k])))

    basis_set = set(basis_idx)
    for i, row in enumerate(constraints):
        if i in basis_set:
            continue
        bit = 1 << i
        values = [_int_dot(row, r) for r, _ in rays]
        pos = [k for k, v in enumerate(values) if v > 0]
        neg = [k for k, v in enumerate(values) if v < 0]
        updated = [rays[k] for k in pos]
        updated += [(rays[k][0], rays[k][1] | bit) for k, v in enumerate(values) if v == 0]
        for kp in pos:
            rp, zp = rays[kp]
            for kn in neg:
                rn, zn = rays[kn]
                common = zp & zn
                if _popcount(common) < dim - 2:
                    continue
                if any(k not in (kp, kn) and zk & common == common for k, (_, zk) in enumerate(rays)):
                    continue
                vp, vn = values[kp], values[kn]
                combined = primitive_row([vp * x - vn * y for x, y in zip(rn, rp)])
                updated.append((tuple(combined), common | bit))
        rays = updated
        logger.debug("dd: row %d processed, %d rays", i, len(rays))

    points = [tuple(Fraction(r[j], r[d]) for j in range(d)) for r, _ in rays if r[d] > 0]
    if any(r[d] == 0 for r, _ in rays):
        if not points:
            if feasible_point(p.inequalities()) is None:
                raise EmptyPolytopeError("the inequality system has no feasible point")
        raise UnboundedPolytopeError("the homogenized cone has rays at infinity")
    if not points:
        raise EmptyPolytopeError("the inequality system has no feasible point")
    logger.info("double description: %d vertices in dimension %d", len(points), d)
    return _vertex_set(p, points)


def vertices_of(p: HPolytope, method: str = "dd", workers: int = 1) -> VertexSet:
    if method == "dd":
        return enumerate_vertices_dd(p)
    if method == "brute":
        return enumerate_vertices(p, workers=workers)
    raise ValueError(f"unknown enumeration method '{method}'")


# Graph and faces -----------------------------------------------------------------


def are_adjacent(p: HPolytope, u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    u, v = vector(u), vector(v)
    if u == v:
        return False
    common = p.active_set(u) & p.active_set(v)
    if len(common) < p.dimension - 1:
        return False
    return _active_rank(p, common) == p.dimension - 1


@dataclass
class PolytopeGraph:
    graph: nx.Graph
    vertices: VertexSet

    @property
    def node_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def neighbors(self, x: Sequence[Fraction]) -> List[Vector]:
        return [self.vertices.vertices[j] for j in sorted(self.graph.neighbors(self.vertices.index(x)))]

    def degree_histogram(self) -> Dict[int, int]:
        histogram: Dict[int, int] = {}
        for _, deg in self.graph.degree():
            histogram[deg] = histogram.get(deg, 0) + 1
        return dict(sorted(histogram.items()))


def build_graph(p: HPolytope, vertices: Optional[VertexSet] = None, labels: Optional[Sequence[str]] = None) -> PolytopeGraph:
    if vertices is None:
        vertices = enumerate_vertices_dd(p)
    d = p.dimension
    g = nx.Graph()
    for k, x in enumerate(vertices.vertices):
        g.add_node(k, point=x, label=labels[k] if labels else str(k))
    n = len(vertices)
    for i in range(n):
        for j in range(i + 1, n):
            common = vertices.active_sets[i] & vertices.active_sets[j]
            if len(common) >= d - 1 and _active_rank(p, common) == d - 1:
                g.add_edge(i, j)
    logger.info("polytope graph: %d nodes, %d edges", g.number_of_nodes(), g.number_of_edges())
    return PolytopeGraph(g, vertices)


@dataclass(frozen=True)
class Facet:
    row: int
    vertices: FrozenSet[int]


def facets(p: HPolytope, vertices: VertexSet) -> List[Facet]:
    """Rows whose tight vertices span a (d-1)-face, one per distinct vertex set."""
    d = p.dimension
    found: Dict[FrozenSet[int], int] = {}
    for i in range(p.nrows):
        tight = frozenset(k for k, active in enumerate(vertices.active_sets) if i in active)
        if len(tight) < d or tight in found:
            continue
        lifted = [tuple(vertices.vertices[k]) + (Fraction(1),) for k in tight]
        if rank_of_rows(lifted, d + 1) == d:
            found[tight] = i
    return [Facet(row, tight) for tight, row in found.items()]


def facet_incidence_graph(p: HPolytope, vertices: Optional[VertexSet] = None) -> nx.Graph:
    if vertices is None:
        vertices = enumerate_vertices_dd(p)
    g = nx.Graph()
    for k in range(len(vertices)):
        g.add_node(("v", k), side="vertex")
    for facet in facets(p, vertices):
        node = ("f", facet.row)
        g.add_node(node, side="facet")
        g.add_edges_from((node, ("v", k)) for k in facet.vertices)
    return g


def incidence_graphs_isomorphic(g1: nx.Graph, g2: nx.Graph) -> bool:
    """Exact test on facet incidence graphs.

    Size and Weisfeiler-Lehman refuters run first; VF2 is only practical for
    small or asymmetric graphs, so large symmetric polytopes should be
    compared through :func:`sign_flip_equivalent` instead.
    """
    if not incidence_invariants_match(g1, g2):
        return False
    return nx.is_isomorphic(g1, g2, node_match=isomorphism.categorical_node_match("side", None))


def incidence_invariants_match(g1: nx.Graph, g2: nx.Graph) -> bool:
    if (g1.number_of_nodes(), g1.number_of_edges()) != (g2.number_of_nodes(), g2.number_of_edges()):
        return False
    h1 = nx.weisfeiler_lehman_graph_hash(g1, node_attr="side")
    h2 = nx.weisfeiler_lehman_graph_hash(g2, node_attr="side")
    return h1 == h2


def negate_columns(p: HPolytope, columns: Iterable[int]) -> HPolytope:
    """Image of p under x_m -> -x_m for every m in columns."""
    columns = set(columns)
    rows = [(tuple(-v if j in columns else v for j, v in enumerate(row)), b) for row, b in p.inequalities()]
    return HPolytope.from_inequalities(rows, p.dimension, p.row_labels, p.a.col_labels)


def same_inequalities(p: HPolytope, q: HPolytope) -> bool:
    return canonical_system(p.inequalities()) == canonical_system(q.inequalities())


def sign_flip_equivalent(p: HPolytope, q: HPolytope, columns: Iterable[int]) -> bool:
    """True when negating ``columns`` carries the rows of p onto the rows of q."""
    return p.dimension == q.dimension and same_inequalities(negate_columns(p, columns), q)


def combinatorially_isomorphic(p: HPolytope, q: HPolytope, columns: Optional[Iterable[int]] = None) -> bool:
    if columns is not None and sign_flip_equivalent(p, q, columns):
        return True
    return incidence_graphs_isomorphic(facet_incidence_graph(p), facet_incidence_graph(q))


def convex_independent(vertices: Sequence[Vector]) -> bool:
    """No point is a convex combination of the others."""
    points = [vector(v) for v in vertices]
    n = len(points)
    if n <= 1:
        return True
    d = len(points[0])
    for k, target in enumerate(points):
        others = [w for j, w in enumerate(points) if j != k]
        m = len(others)
        eqs = [(tuple(w[i] for w in others), target[i]) for i in range(d)]
        eqs.append(((Fraction(1),) * m, Fraction(1)))
        nonneg = [(tuple(Fraction(int(j == t)) for j in range(m)), Fraction(0)) for t in range(m)]
        if feasible_point(nonneg, eqs) is not None:
            logger.debug("point %d lies in the hull of the others", k)
            return False
    return True
