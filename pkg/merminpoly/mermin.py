"""
mermin.py
The Mermin polytopes MP_beta in expectation coordinates, the bridge to
per-context distribution tables, vertex constructors from cnc data, signed
loops and the structural checks on enumerated vertex sets.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import InvalidDescriptorError, InvalidSignedLoopError, NonsignalingViolationError
from .exactla import Vector, feasible_point, rank_of_rows, vector
from .polytope import (
    HPolytope,
    PolytopeGraph,
    VertexSet,
    are_adjacent,
    build_graph,
    combinatorially_isomorphic,
    contains,
    facet_incidence_graph,
    incidence_graphs_isomorphic,
    is_vertex,
    sign_flip_equivalent,
    vertices_of,
)
from .scenario import (
    CONTEXT_COUNT,
    CONTEXT_NAMES,
    CONTEXTS,
    MEASUREMENT_COUNT,
    MEASUREMENT_LABELS,
    BetaAssignment,
    CncSet,
    IncidenceWeight,
    Loop,
    OutcomeAssignment,
    beta_of_weight,
    enumerate_cnc_sets,
    flips_between,
    is_even,
    measurement_flips,
    normalize_incidence_weight,
    outcome_assignments,
    respects_beta,
)

logger = logging.getLogger(__name__)

# nine expectation values, column order m_00 .. m_22
ExpectationPoint = Vector

OUTCOME_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def parity_sign(bit: int) -> int:
    return -1 if bit % 2 else 1


def row_label(context: int, a: int, b: int) -> str:
    return f"{CONTEXT_NAMES[context]}:{a}{b}"


def build_h_rep(beta: BetaAssignment) -> HPolytope:
    """24 rows (C, ab): (-1)^a at x, (-1)^b at y, (-1)^(a+b+beta(C)) at z, all with b = -1."""
    rows, labels = [], []
    for c, (x, y, z) in enumerate(CONTEXTS):
        for a, b in OUTCOME_PAIRS:
            row = [0] * MEASUREMENT_COUNT
            row[x] = parity_sign(a)
            row[y] = parity_sign(b)
            row[z] = parity_sign(a + b + beta[c])
            rows.append((row, -1))
            labels.append(row_label(c, a, b))
    return HPolytope.from_inequalities(rows, MEASUREMENT_COUNT, labels, MEASUREMENT_LABELS)


_ODD_MINUS_PATTERNS = ((-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1))


def build_tilde_h_rep(w: IncidenceWeight) -> HPolytope:
    """Generalized polytope of an incidence weight, rows tau * eps per context."""
    rows, labels = [], []
    for c, ctx in enumerate(CONTEXTS):
        eps = [1 if w.get(c, m) else -1 for m in ctx]
        for k, tau in enumerate(_ODD_MINUS_PATTERNS):
            row = [0] * MEASUREMENT_COUNT
            for m, t, e in zip(ctx, tau, eps):
                row[m] = t * e
            rows.append((row, -1))
            labels.append(f"{CONTEXT_NAMES[c]}:t{k}")
    return HPolytope.from_inequalities(rows, MEASUREMENT_COUNT, labels, MEASUREMENT_LABELS)


# Distributions ----------------------------------------------------------------------


@dataclass(frozen=True)
class MerminDistribution:
    """Six context tables p_C^ab in the order 00, 01, 10, 11; z carries a + b + beta(C)."""

    beta: BetaAssignment
    tables: Tuple[Tuple[Fraction, Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        if len(self.tables) != CONTEXT_COUNT or any(len(t) != 4 for t in self.tables):
            raise ValueError("a Mermin distribution has six tables of four entries")

    def entry(self, context: int, a: int, b: int) -> Fraction:
        return self.tables[context][2 * a + b]

    @property
    def proper(self) -> bool:
        return all(v >= 0 for table in self.tables for v in table)

    def marginal(self, context: int, position: int, outcome: int) -> Fraction:
        """Probability that the measurement at ``position`` of the context reads ``outcome``."""
        total = Fraction(0)
        for (a, b), value in zip(OUTCOME_PAIRS, self.tables[context]):
            reading = (a, b, (a + b + self.beta[context]) % 2)[position]
            if reading == outcome:
                total += value
        return total

    def first_negative(self) -> Optional[Tuple[int, int, int, Fraction]]:
        for c, table in enumerate(self.tables):
            for (a, b), value in zip(OUTCOME_PAIRS, table):
                if value < 0:
                    return c, a, b, value
        return None


def dist_from_expectations(e: Sequence, beta: BetaAssignment) -> MerminDistribution:
    e = vector(e)
    tables = []
    for c, (x, y, z) in enumerate(CONTEXTS):
        tables.append(tuple(
            (1 + parity_sign(a) * e[x] + parity_sign(b) * e[y] + parity_sign(a + b + beta[c]) * e[z]) * QUARTER
            for a, b in OUTCOME_PAIRS
        ))
    return MerminDistribution(beta, tuple(tables))


def expectations_from_dist(p: MerminDistribution) -> ExpectationPoint:
    values: Dict[int, Fraction] = {}
    for c, ctx in enumerate(CONTEXTS):
        total = sum(p.tables[c], Fraction(0))
        if total != 1:
            raise NonsignalingViolationError(f"table of {CONTEXT_NAMES[c]} sums to {total}")
        for position, m in enumerate(ctx):
            expectation = p.marginal(c, position, 0) - p.marginal(c, position, 1)
            if m in values and values[m] != expectation:
                raise NonsignalingViolationError(
                    f"{MEASUREMENT_LABELS[m]} has expectation {values[m]} and {expectation} in different contexts"
                )
            values[m] = expectation
    return tuple(values[m] for m in range(MEASUREMENT_COUNT))


def dist_from_marginals(zero_marginals: Sequence[Fraction], beta_bit: int) -> Tuple[Fraction, ...]:
    """One context table from the three marginals p_x^0, p_y^0, p_z^0.

    p^ab = (p_x^a + p_y^b - p_z^(c+1)) / 2 with c = a + b + beta.
    """
    px0, py0, pz0 = (Fraction(v) for v in zero_marginals)

    def marg(p0: Fraction, outcome: int) -> Fraction:
        return p0 if outcome % 2 == 0 else 1 - p0

    return tuple(
        (marg(px0, a) + marg(py0, b) - marg(pz0, a + b + beta_bit + 1)) * HALF
        for a, b in OUTCOME_PAIRS
    )


def mermin_member(e: Sequence, beta: BetaAssignment) -> bool:
    """Membership checked on the distribution side: tables nonnegative and consistent."""
    p = dist_from_expectations(e, beta)
    if not p.proper:
        return False
    return expectations_from_dist(p) == vector(e)


# Vertices from cnc data -----------------------------------------------------------


@dataclass(frozen=True)
class VertexDescriptor:
    kind: str  # "deterministic" | "cnc"
    omega: CncSet
    assignment: OutcomeAssignment

    @classmethod
    def deterministic(cls, s: OutcomeAssignment) -> "VertexDescriptor":
        return cls("deterministic", CncSet(frozenset(range(MEASUREMENT_COUNT))), s)

    @classmethod
    def cnc(cls, omega: CncSet, s: OutcomeAssignment) -> "VertexDescriptor":
        return cls("cnc", omega, s)


def vertex_from_descriptor(d: VertexDescriptor, beta: BetaAssignment) -> ExpectationPoint:
    cls = beta.cohomology_class
    if d.kind == "deterministic" and cls != 0:
        raise InvalidDescriptorError("deterministic vertices only exist for cohomology class 0")
    if d.kind == "cnc" and cls != 1:
        raise InvalidDescriptorError("cnc vertices only exist for cohomology class 1")
    if d.kind not in ("deterministic", "cnc"):
        raise InvalidDescriptorError(f"unknown descriptor kind '{d.kind}'")
    if d.kind == "cnc" and d.omega not in enumerate_cnc_sets(beta):
        raise InvalidDescriptorError(f"{d.omega.labels()} is not a maximal cnc set")
    s = d.assignment.as_dict()
    if set(s) != set(d.omega.members):
        raise InvalidDescriptorError("the assignment must be defined exactly on the carrier")
    if not respects_beta(s, beta):
        raise InvalidDescriptorError("the assignment violates a context parity")
    return tuple(Fraction(parity_sign(s[m])) if m in s else Fraction(0) for m in range(MEASUREMENT_COUNT))


def all_descriptors(beta: BetaAssignment) -> List[VertexDescriptor]:
    if beta.cohomology_class == 0:
        omega = CncSet(frozenset(range(MEASUREMENT_COUNT)))
        return [VertexDescriptor.deterministic(s) for s in outcome_assignments(omega, beta)]
    return [
        VertexDescriptor.cnc(omega, s)
        for omega in enumerate_cnc_sets(beta)
        for s in outcome_assignments(omega, beta)
    ]


def vertex_type(e: Sequence[Fraction]) -> str:
    support = sum(1 for v in e if v != 0)
    return {9: "deterministic", 3: "type-1", 5: "type-2"}.get(support, "other")


def deterministic_points() -> List[ExpectationPoint]:
    return [tuple(Fraction(v) for v in signs) for signs in itertools.product((1, -1), repeat=MEASUREMENT_COUNT)]


@dataclass
class ClassificationReport:
    beta: BetaAssignment
    enumerated: int
    predicted: int
    type_counts: Dict[str, int]
    missing: List[ExpectationPoint] = field(default_factory=list)
    extra: List[ExpectationPoint] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.missing and not self.extra and self.enumerated == self.predicted


def verify_vertex_classification(beta: BetaAssignment, vertices: Optional[VertexSet] = None,
                                 method: str = "dd", workers: int = 1) -> ClassificationReport:
    if vertices is None:
        vertices = vertices_of(build_h_rep(beta), method=method, workers=workers)
    predicted = {vertex_from_descriptor(d, beta) for d in all_descriptors(beta)}
    found = vertices.as_set()
    counts: Dict[str, int] = {}
    for v in vertices:
        kind = vertex_type(v)
        counts[kind] = counts.get(kind, 0) + 1
    report = ClassificationReport(
        beta=beta,
        enumerated=len(found),
        predicted=len(predicted),
        type_counts=dict(sorted(counts.items())),
        missing=sorted(predicted - found),
        extra=sorted(found - predicted),
    )
    logger.info("classification for %s: %d enumerated, %d predicted", beta.values, report.enumerated, report.predicted)
    return report


# Signed loops ------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedLoop:
    loop: Loop
    signs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if set(m for m, _ in self.signs) != set(self.loop.edges):
            raise InvalidSignedLoopError("a signed loop needs exactly one sign per loop edge")
        if any(s not in (1, -1) for _, s in self.signs):
            raise InvalidSignedLoopError("loop signs are +1 or -1")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "SignedLoop":
        loop = Loop(frozenset(mapping))
        if not loop.edges or not is_even(loop.edges):
            raise InvalidSignedLoopError("signed loop support is not a loop")
        return cls(loop, tuple(sorted(mapping.items())))

    def as_vector(self) -> Vector:
        signs = dict(self.signs)
        return tuple(Fraction(signs.get(m, 0)) for m in range(MEASUREMENT_COUNT))


def signed_loop_displacement(phi: SignedLoop, beta: BetaAssignment) -> Tuple[Tuple[Fraction, ...], ...]:
    f = phi.as_vector()
    tables = []
    for c, (x, y, z) in enumerate(CONTEXTS):
        tables.append(tuple(
            (parity_sign(a) * f[x] + parity_sign(b) * f[y] + parity_sign(a + b + beta[c]) * f[z]) * QUARTER
            for a, b in OUTCOME_PAIRS
        ))
    return tuple(tables)


def signed_loop_between(u: Sequence[Fraction], v: Sequence[Fraction]) -> SignedLoop:
    diff = [b - a for a, b in zip(vector(u), vector(v))]
    mapping = {}
    for m, delta in enumerate(diff):
        if delta == 0:
            continue
        if delta not in (1, -1):
            raise InvalidSignedLoopError(f"difference {delta} at {MEASUREMENT_LABELS[m]} is not a unit step")
        mapping[m] = int(delta)
    return SignedLoop.from_mapping(mapping)


@dataclass(frozen=True)
class EdgePath:
    """p(alpha) = start + 2 * alpha * phi for alpha in [0, 1/2]."""

    start: ExpectationPoint
    phi: SignedLoop
    endpoint: ExpectationPoint
    is_edge: bool

    def at(self, alpha) -> ExpectationPoint:
        alpha = Fraction(alpha)
        if not 0 <= alpha <= HALF:
            raise ValueError("alpha runs over [0, 1/2]")
        return tuple(s + 2 * alpha * f for s, f in zip(self.start, self.phi.as_vector()))


def edge_path(p: HPolytope, q1: Sequence[Fraction], phi: SignedLoop) -> EdgePath:
    q1 = vector(q1)
    direction = phi.as_vector()
    for i in p.active_set(q1):
        if sum((a * f for a, f in zip(p.a.rows[i], direction)), Fraction(0)) < 0:
            raise InvalidSignedLoopError(f"row {p.row_labels[i] if p.row_labels else i} is violated for small alpha")
    endpoint = tuple(s + f for s, f in zip(q1, direction))
    if not contains(p, endpoint):
        raise InvalidSignedLoopError("the path leaves the polytope before alpha = 1/2")
    edge = is_vertex(p, endpoint) and are_adjacent(p, q1, endpoint)
    return EdgePath(q1, phi, endpoint, edge)


# Zero patterns and ranks ----------------------------------------------------------------


@dataclass(frozen=True)
class ZeroPattern:
    zeros_per_context: Tuple[int, ...]
    census: Tuple[int, int, int]
    deterministic_triangles: Tuple[int, ...]
    deterministic_edges: Tuple[int, ...]


def zero_pattern(p: MerminDistribution) -> ZeroPattern:
    zeros = tuple(sum(1 for v in table if v == 0) for table in p.tables)
    census = (zeros.count(3), zeros.count(2), zeros.count(1))
    triangles = tuple(c for c in range(CONTEXT_COUNT) if zeros[c] == 3)
    edges = set()
    for c, ctx in enumerate(CONTEXTS):
        for position, m in enumerate(ctx):
            if p.marginal(c, position, 0) in (0, 1):
                edges.add(m)
    return ZeroPattern(zeros, census, triangles, tuple(sorted(edges)))


def zero_case_table() -> List[Tuple[int, int, int]]:
    """(n3, n2, n1) with 3 n3 + 2 n2 + n1 = 9 over at most six contexts."""
    cases = []
    for n3 in range(3, -1, -1):
        for n2 in range(0, 4):
            n1 = 9 - 3 * n3 - 2 * n2
            if n1 >= 0 and n3 + n2 + n1 <= CONTEXT_COUNT:
                cases.append((n3, n2, n1))
    return sorted(cases, key=lambda t: (-t[0], t[2]))


@dataclass(frozen=True)
class RankCase:
    name: str
    rows: Tuple[Tuple[int, ...], ...]
    expected: int

    @property
    def computed(self) -> int:
        return rank_of_rows(self.rows, len(self.rows[0]))


def zero_pattern_rank_cases() -> List[RankCase]:
    """Active-row matrices for single triangles, diamonds and a triangle with its three neighbours."""
    single_edge = ((1, -1, -1), (1, 1, 1))
    det_triangle = ((1, -1, -1), (-1, 1, -1), (-1, -1, 1))
    # columns x, x+z, z, x', x'+z
    diamond = {
        "diamond 1+1": ((1, 1, 1, 0, 0), (0, 0, 1, 1, 1)),
        "diamond 2+1": ((1, 1, 1, 0, 0), (1, -1, -1, 0, 0), (0, 0, 1, 1, 1)),
        "diamond 2+2": ((1, 1, 1, 0, 0), (1, -1, -1, 0, 0), (0, 0, 1, 1, 1), (0, 0, -1, 1, -1)),
        "diamond 2+2 deterministic z": ((1, 1, 1, 0, 0), (-1, -1, 1, 0, 0), (0, 0, 1, 1, 1), (0, 0, 1, -1, -1)),
        "diamond 3+2 deterministic z": (
            (1, -1, -1, 0, 0), (-1, 1, -1, 0, 0), (-1, -1, 1, 0, 0), (0, 0, 1, 1, 1), (0, 0, 1, -1, -1),
        ),
        "diamond 3+3 deterministic z": (
            (1, -1, -1, 0, 0), (-1, 1, -1, 0, 0), (-1, -1, 1, 0, 0),
            (0, 0, -1, 1, -1), (0, 0, 1, -1, -1), (0, 0, -1, -1, 1),
        ),
    }
    expected = {
        "diamond 1+1": 2,
        "diamond 2+1": 3,
        "diamond 2+2": 4,
        "diamond 2+2 deterministic z": 3,
        "diamond 3+2 deterministic z": 4,
        "diamond 3+3 deterministic z": 5,
    }
    # columns x, y, z, x', x+x', y', y+y', z', z+z'
    three_diamonds = (
        (1, -1, -1, 0, 0, 0, 0, 0, 0),
        (-1, 1, -1, 0, 0, 0, 0, 0, 0),
        (-1, -1, 1, 0, 0, 0, 0, 0, 0),
        (-1, 0, 0, 1, -1, 0, 0, 0, 0),
        (-1, 0, 0, -1, 1, 0, 0, 0, 0),
        (0, -1, 0, 0, 0, 1, -1, 0, 0),
        (0, -1, 0, 0, 0, -1, 1, 0, 0),
        (0, 0, -1, 0, 0, 0, 0, 1, -1),
        (0, 0, -1, 0, 0, 0, 0, -1, 1),
    )
    cases = [RankCase("single deterministic edge", single_edge, 2), RankCase("deterministic triangle", det_triangle, 3)]
    cases += [RankCase(name, rows, expected[name]) for name, rows in diamond.items()]
    cases.append(RankCase("triangle with three neighbours", three_diamonds, 6))
    return cases


def edge_rank(p: HPolytope, u: Sequence[Fraction], v: Sequence[Fraction]) -> int:
    common = p.active_set(vector(u)) & p.active_set(vector(v))
    return rank_of_rows([p.a.rows[i] for i in common], p.dimension)


# Graph structure ------------------------------------------------------------------------


@dataclass
class GraphStructureReport:
    node_count: int
    edge_count: int
    degree_histogram: Dict[int, int]
    degrees_by_type: Dict[str, List[int]]
    type1_independent: bool


def verify_graph_structure(beta: BetaAssignment, graph: Optional[PolytopeGraph] = None) -> GraphStructureReport:
    if graph is None:
        graph = build_graph(build_h_rep(beta))
    by_type: Dict[str, set] = {}
    type1 = []
    for k, v in enumerate(graph.vertices.vertices):
        kind = vertex_type(v)
        by_type.setdefault(kind, set()).add(graph.graph.degree(k))
        if kind == "type-1":
            type1.append(k)
    independent = graph.graph.subgraph(type1).number_of_edges() == 0
    return GraphStructureReport(
        node_count=graph.node_count,
        edge_count=graph.edge_count,
        degree_histogram=graph.degree_histogram(),
        degrees_by_type={k: sorted(v) for k, v in sorted(by_type.items())},
        type1_independent=independent,
    )


def two_edge_rule_holds(vertices: Sequence[ExpectationPoint], beta: BetaAssignment) -> bool:
    """In every vertex a context with two deterministic edges is a deterministic triangle."""
    for v in vertices:
        p = dist_from_expectations(v, beta)
        for c, ctx in enumerate(CONTEXTS):
            det = [m for m in ctx if v[m] in (1, -1)]
            if len(det) >= 2 and sum(1 for t in p.tables[c] if t == 0) != 3:
                return False
    return True


# Noncontextual decomposition and sampling ------------------------------------------------


def decompose_mp0(e: Sequence[Fraction], vertices: Optional[Sequence[ExpectationPoint]] = None) -> Optional[Dict[ExpectationPoint, Fraction]]:
    """Exact convex weights of an MP_0 member over the deterministic vertices."""
    if vertices is None:
        vertices = [vertex_from_descriptor(d, BetaAssignment.beta0()) for d in all_descriptors(BetaAssignment.beta0())]
    e = vector(e)
    n = len(vertices)
    eqs = [(tuple(v[m] for v in vertices), e[m]) for m in range(MEASUREMENT_COUNT)]
    eqs.append(((Fraction(1),) * n, Fraction(1)))
    nonneg = [(tuple(Fraction(int(j == k)) for j in range(n)), Fraction(0)) for k in range(n)]
    weights = feasible_point(nonneg, eqs)
    if weights is None:
        return None
    return {v: w for v, w in zip(vertices, weights) if w != 0}


def random_weights(rng: random.Random, n: int, max_denominator: int = 12) -> List[Fraction]:
    raw = [rng.randint(0, max_denominator) for _ in range(n)]
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_mp_point(vertices: Sequence[ExpectationPoint], rng: random.Random, support: int = 4) -> ExpectationPoint:
    """A random rational mixture of a few vertices."""
    chosen = [vertices[rng.randrange(len(vertices))] for _ in range(support)]
    weights = random_weights(rng, support)
    return tuple(sum((w * v[m] for w, v in zip(weights, chosen)), Fraction(0)) for m in range(MEASUREMENT_COUNT))


def random_box_point(rng: random.Random, max_denominator: int = 6) -> ExpectationPoint:
    points = []
    for _ in range(MEASUREMENT_COUNT):
        q = rng.randint(1, max_denominator)
        points.append(Fraction(rng.randint(-q, q), q))
    return tuple(points)


# Incidence weights --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightInvarianceRecord:
    weight: IncidenceWeight
    canonical: IncidenceWeight
    moves: int
    weight_class: int
    flips: FrozenSet[int]
    isomorphic_to_class: bool
    isomorphic_to_other: bool


def incidence_weight_invariance(weights: Sequence[IncidenceWeight], method: str = "dd") -> List[WeightInvarianceRecord]:
    """Normalize each weight and compare its polytope with MP_0 and MP_1.

    Within a class the normalization moves give the measurement negation
    that carries the weighted rows onto the reference rows. Across classes
    the facet incidence graphs are compared.
    """
    betas = {0: BetaAssignment.beta0(), 1: BetaAssignment.beta1()}
    reps = {cls: build_h_rep(beta) for cls, beta in betas.items()}
    graphs = {cls: facet_incidence_graph(rep) for cls, rep in reps.items()}
    cache: Dict[frozenset, object] = {}
    records = []
    for w in weights:
        canonical, moves = normalize_incidence_weight(w)
        p = build_tilde_h_rep(w)
        cls = w.total_class
        flips = measurement_flips(moves) ^ flips_between(beta_of_weight(canonical), betas[cls])
        key = frozenset(zip(p.a.rows, p.b))
        if key not in cache:
            cache[key] = facet_incidence_graph(p, vertices_of(p, method=method))
        records.append(WeightInvarianceRecord(
            weight=w,
            canonical=canonical,
            moves=len(moves),
            weight_class=cls,
            flips=flips,
            isomorphic_to_class=sign_flip_equivalent(p, reps[cls], flips),
            isomorphic_to_other=incidence_graphs_isomorphic(cache[key], graphs[1 - cls]),
        ))
        logger.debug("weight of class %d normalized in %d moves", cls, len(moves))
    return records


def tilde_rows_match_beta(w: IncidenceWeight) -> bool:
    tilde = build_tilde_h_rep(w)
    plain = build_h_rep(beta_of_weight(w))
    return set(zip(tilde.a.rows, tilde.b)) == set(zip(plain.a.rows, plain.b))


def mp_isomorphic(beta1: BetaAssignment, beta2: BetaAssignment) -> bool:
    """Same class: certified by a measurement negation. Otherwise by incidence graphs."""
    p, q = build_h_rep(beta1), build_h_rep(beta2)
    flips = flips_between(beta1, beta2)
    if flips is not None:
        return sign_flip_equivalent(p, q, flips)
    return combinatorially_isomorphic(p, q)
