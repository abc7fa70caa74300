"""
scenario.py
Combinatorics of the 3x3 Mermin grid: measurements, contexts, parity
assignments, loops of the K33 incidence graph, closed noncontextual sets and
incidence weights with their normalization moves.

Measurements are the integers 0..8 with m_ij stored at index 3*i + j.
Contexts are indexed 0..5: hor_0, hor_1, hor_2, ver_0, ver_1, ver_2.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import InputFormatError

logger = logging.getLogger(__name__)

MEASUREMENT_COUNT = 9
CONTEXT_COUNT = 6

MEASUREMENT_LABELS: Tuple[str, ...] = tuple(f"m_{i}{j}" for i in range(3) for j in range(3))
CONTEXT_NAMES: Tuple[str, ...] = ("hor_0", "hor_1", "hor_2", "ver_0", "ver_1", "ver_2")
CONTEXTS: Tuple[Tuple[int, int, int], ...] = tuple(
    [tuple(3 * i + j for j in range(3)) for i in range(3)]
    + [tuple(3 * i + j for i in range(3)) for j in range(3)]
)

# CHSH variables carried by each measurement when the grid is read as the
# torus glued from the four CHSH triangles and the diamond
TORUS_LABELS: Tuple[str, ...] = ("x0", "y0", "x0+y0", "y1", "x1", "x1+y1", "x0+y1", "x1+y0", "z")
TORUS_VARIABLES: Tuple[FrozenSet[str], ...] = (
    frozenset({"x0"}),
    frozenset({"y0"}),
    frozenset({"x0", "y0"}),
    frozenset({"y1"}),
    frozenset({"x1"}),
    frozenset({"x1", "y1"}),
    frozenset({"x0", "y1"}),
    frozenset({"x1", "y0"}),
    frozenset({"x0", "x1", "y0", "y1"}),
)
CHSH_VARIABLES: Tuple[str, ...] = ("x0", "x1", "y0", "y1")


def is_horizontal(context: int) -> bool:
    return context < 3


def contexts_of(measurement: int) -> Tuple[int, int]:
    """The horizontal and the vertical context through a measurement."""
    i, j = divmod(measurement, 3)
    return i, 3 + j


def shared_measurement(c1: int, c2: int) -> Optional[int]:
    common = set(CONTEXTS[c1]) & set(CONTEXTS[c2])
    if len(common) == 1:
        return common.pop()
    return None


def measurement_index(label: str) -> int:
    try:
        return MEASUREMENT_LABELS.index(label)
    except ValueError:
        raise InputFormatError(f"unknown measurement '{label}'") from None


def context_index(name: str) -> int:
    try:
        return CONTEXT_NAMES.index(name)
    except ValueError:
        raise InputFormatError(f"unknown context '{name}'") from None


@dataclass(frozen=True)
class MerminScenario:
    measurements: Tuple[str, ...] = MEASUREMENT_LABELS
    context_names: Tuple[str, ...] = CONTEXT_NAMES
    contexts: Tuple[Tuple[int, int, int], ...] = CONTEXTS

    def incidence_edges(self) -> List[Tuple[int, int, int]]:
        """(horizontal context, vertical context, measurement) for the 9 K33 edges."""
        return [(*contexts_of(m), m) for m in range(MEASUREMENT_COUNT)]

    def check(self) -> bool:
        counts = [sum(m in ctx for ctx in self.contexts) for m in range(MEASUREMENT_COUNT)]
        if counts != [2] * MEASUREMENT_COUNT:
            return False
        for c1, c2 in itertools.combinations(range(CONTEXT_COUNT), 2):
            common = len(set(self.contexts[c1]) & set(self.contexts[c2]))
            expected = 0 if is_horizontal(c1) == is_horizontal(c2) else 1
            if common != expected:
                return False
        return True


SCENARIO = MerminScenario()


# Parity assignments -----------------------------------------------------------


@dataclass(frozen=True)
class BetaAssignment:
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != CONTEXT_COUNT or any(v not in (0, 1) for v in self.values):
            raise InputFormatError(f"beta needs six bits, got {self.values}")

    @classmethod
    def beta0(cls) -> "BetaAssignment":
        return cls((0,) * CONTEXT_COUNT)

    @classmethod
    def beta1(cls) -> "BetaAssignment":
        return cls((0, 0, 0, 1, 1, 1))

    @classmethod
    def from_contexts(cls, names: Iterable[str]) -> "BetaAssignment":
        chosen = {context_index(n) for n in names}
        return cls(tuple(int(c in chosen) for c in range(CONTEXT_COUNT)))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "BetaAssignment":
        values = [0] * CONTEXT_COUNT
        for name, bit in mapping.items():
            if bit not in (0, 1):
                raise InputFormatError(f"beta value for {name} must be 0 or 1")
            values[context_index(name)] = int(bit)
        return cls(tuple(values))

    def __getitem__(self, context: int) -> int:
        return self.values[context]

    @property
    def cohomology_class(self) -> int:
        return sum(self.values) % 2

    def as_mapping(self) -> Dict[str, int]:
        return {name: bit for name, bit in zip(CONTEXT_NAMES, self.values)}


BETA_PRESETS: Dict[str, BetaAssignment] = {
    "beta0": BetaAssignment.beta0(),
    "beta1": BetaAssignment.beta1(),
    "single": BetaAssignment.from_contexts(["hor_0"]),
    "mixed": BetaAssignment.from_contexts(["hor_0", "hor_1", "ver_2"]),
}


def cohomology_class(beta: BetaAssignment) -> int:
    return beta.cohomology_class


# Loops ------------------------------------------------------------------------


def is_even(edges: Iterable[int]) -> bool:
    edges = set(edges)
    return all(len(edges & set(ctx)) % 2 == 0 for ctx in CONTEXTS)


@dataclass(frozen=True)
class Loop:
    edges: FrozenSet[int]

    @property
    def kind(self) -> str:
        return {0: "empty", 4: "a", 6: "b"}[len(self.edges)]

    @property
    def sorted_edges(self) -> Tuple[int, ...]:
        return tuple(sorted(self.edges))

    def __xor__(self, other: "Loop") -> "Loop":
        return Loop(self.edges ^ other.edges)

    def labels(self) -> List[str]:
        return [MEASUREMENT_LABELS[m] for m in self.sorted_edges]


def cycle_space() -> List[Loop]:
    """The 16 even edge subsets, the empty one first."""
    space = []
    for bits in range(1 << MEASUREMENT_COUNT):
        edges = frozenset(m for m in range(MEASUREMENT_COUNT) if bits >> m & 1)
        if is_even(edges):
            space.append(Loop(edges))
    return sorted(space, key=lambda loop: (len(loop.edges) > 0, loop.sorted_edges))


def enumerate_loops() -> List[Loop]:
    """Nonempty cycles of K33; in this graph every nonzero even subgraph is a single cycle."""
    return sorted((l for l in cycle_space() if l.edges), key=lambda loop: loop.sorted_edges)


def chsh_generator_loops() -> Dict[str, Loop]:
    """Loops flipping one CHSH variable under the torus labelling."""
    return {
        var: Loop(frozenset(m for m in range(MEASUREMENT_COUNT) if var in TORUS_VARIABLES[m]))
        for var in CHSH_VARIABLES
    }


def decomposition_aliases() -> Dict[str, Loop]:
    gens = chsh_generator_loops()
    return {
        "l2a": gens["x0"],
        "l4a": gens["x1"],
        "l9a": gens["y0"],
        "l3a": gens["y1"],
        "l1a": gens["x0"] ^ gens["y1"],
    }


# Closed noncontextual sets ------------------------------------------------------


@dataclass(frozen=True)
class OutcomeAssignment:
    values: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> "OutcomeAssignment":
        return cls(tuple(sorted((int(m), int(b) % 2) for m, b in mapping.items())))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.values)

    @property
    def carrier(self) -> FrozenSet[int]:
        return frozenset(m for m, _ in self.values)

    def __getitem__(self, measurement: int) -> int:
        return self.as_dict()[measurement]


def is_closed(members: Iterable[int]) -> bool:
    members = set(members)
    for ctx in CONTEXTS:
        inside = members & set(ctx)
        if len(inside) == 2:
            return False
    return True


def respects_beta(assignment: Mapping[int, int], beta: BetaAssignment) -> bool:
    for c, ctx in enumerate(CONTEXTS):
        if all(m in assignment for m in ctx):
            if sum(assignment[m] for m in ctx) % 2 != beta[c]:
                return False
    return True


@dataclass(frozen=True)
class CncSet:
    members: FrozenSet[int]
    kind: str = field(default="")

    def __post_init__(self):
        if not self.kind:
            kind = {3: "type-1", 5: "type-2", 9: "global"}.get(len(self.members), "partial")
            object.__setattr__(self, "kind", kind)

    @property
    def sorted_members(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))

    def complement(self) -> Loop:
        return Loop(frozenset(range(MEASUREMENT_COUNT)) - self.members)

    def labels(self) -> List[str]:
        return [MEASUREMENT_LABELS[m] for m in self.sorted_members]


def outcome_assignments(omega: CncSet, beta: BetaAssignment) -> List[OutcomeAssignment]:
    if not is_closed(omega.members):
        raise ValueError(f"{omega.labels()} is not closed under context completion")
    members = omega.sorted_members
    found = []
    for bits in itertools.product((0, 1), repeat=len(members)):
        assignment = dict(zip(members, bits))
        if respects_beta(assignment, beta):
            found.append(OutcomeAssignment.from_mapping(assignment))
    return found


@lru_cache(maxsize=None)
def _maximal_cnc_sets(beta: BetaAssignment) -> Tuple[CncSet, ...]:
    candidates = []
    for bits in range(1, 1 << MEASUREMENT_COUNT):
        members = frozenset(m for m in range(MEASUREMENT_COUNT) if bits >> m & 1)
        if is_closed(members) and outcome_assignments(CncSet(members), beta):
            candidates.append(members)
    maximal = [s for s in candidates if not any(s < t for t in candidates)]
    result = sorted((CncSet(s) for s in maximal), key=lambda c: (c.kind, c.sorted_members))
    logger.debug("found %d maximal cnc sets", len(result))
    return tuple(result)


def enumerate_cnc_sets(beta: BetaAssignment) -> List[CncSet]:
    """Maximal closed noncontextual sets under beta."""
    return list(_maximal_cnc_sets(beta))


# K33 automorphisms -----------------------------------------------------------------


@dataclass(frozen=True)
class K33Automorphism:
    """Permutation of the six contexts preserving the bipartite incidence."""

    context_perm: Tuple[int, ...]

    @classmethod
    def identity(cls) -> "K33Automorphism":
        return cls(tuple(range(CONTEXT_COUNT)))

    def __mul__(self, other: "K33Automorphism") -> "K33Automorphism":
        # apply other first
        return K33Automorphism(tuple(self.context_perm[other.context_perm[c]] for c in range(CONTEXT_COUNT)))

    def inverse(self) -> "K33Automorphism":
        inv = [0] * CONTEXT_COUNT
        for c, image in enumerate(self.context_perm):
            inv[image] = c
        return K33Automorphism(tuple(inv))

    def swaps_families(self) -> bool:
        return not is_horizontal(self.context_perm[0])

    def edge_image(self, measurement: int) -> int:
        h, v = contexts_of(measurement)
        a, b = self.context_perm[h], self.context_perm[v]
        hor, ver = min(a, b), max(a, b)
        return 3 * hor + (ver - 3)

    @property
    def edge_perm(self) -> Tuple[int, ...]:
        return tuple(self.edge_image(m) for m in range(MEASUREMENT_COUNT))

    def apply_edges(self, edges: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.edge_image(m) for m in edges)


def k33_generators() -> List[K33Automorphism]:
    row_swap = K33Automorphism((1, 0, 2, 3, 4, 5))
    row_cycle = K33Automorphism((1, 2, 0, 3, 4, 5))
    col_swap = K33Automorphism((0, 1, 2, 4, 3, 5))
    col_cycle = K33Automorphism((0, 1, 2, 4, 5, 3))
    # ver_1 <-> hor_0, ver_2 <-> hor_2, ver_0 <-> hor_1
    reflection = K33Automorphism((4, 3, 5, 1, 0, 2))
    return [row_swap, row_cycle, col_swap, col_cycle, reflection]


def k33_automorphisms() -> List[K33Automorphism]:
    identity = K33Automorphism.identity()
    generators = k33_generators()
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen, key=lambda a: a.context_perm)


# Incidence weights -------------------------------------------------------------------

INCIDENCES: Tuple[Tuple[int, int], ...] = tuple((c, m) for c in range(CONTEXT_COUNT) for m in CONTEXTS[c])
_INCIDENCE_INDEX = {pair: k for k, pair in enumerate(INCIDENCES)}


@dataclass(frozen=True)
class IncidenceWeight:
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(INCIDENCES) or any(v not in (0, 1) for v in self.values):
            raise InputFormatError("an incidence weight needs 18 bits")

    @classmethod
    def zero(cls) -> "IncidenceWeight":
        return cls((0,) * len(INCIDENCES))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "IncidenceWeight":
        return cls.zero().flipped(pairs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Mapping[str, int]]) -> "IncidenceWeight":
        pairs = []
        for cname, row in mapping.items():
            c = context_index(cname)
            for mlabel, bit in row.items():
                m = measurement_index(mlabel)
                if (c, m) not in _INCIDENCE_INDEX:
                    raise InputFormatError(f"{mlabel} does not lie in {cname}")
                if bit not in (0, 1):
                    raise InputFormatError("incidence weights are bits")
                if bit:
                    pairs.append((c, m))
        return cls.from_pairs(pairs)

    def get(self, context: int, measurement: int) -> int:
        return self.values[_INCIDENCE_INDEX[(context, measurement)]]

    def flipped(self, pairs: Iterable[Tuple[int, int]]) -> "IncidenceWeight":
        values = list(self.values)
        for pair in pairs:
            values[_INCIDENCE_INDEX[pair]] ^= 1
        return IncidenceWeight(tuple(values))

    @property
    def total_class(self) -> int:
        return sum(self.values) % 2

    def ones_in(self, context: int) -> List[int]:
        return [m for m in CONTEXTS[context] if self.get(context, m)]

    def as_mapping(self) -> Dict[str, Dict[str, int]]:
        return {
            CONTEXT_NAMES[c]: {MEASUREMENT_LABELS[m]: self.get(c, m) for m in CONTEXTS[c]}
            for c in range(CONTEXT_COUNT)
        }


def beta_of_weight(w: IncidenceWeight) -> BetaAssignment:
    return BetaAssignment(tuple(len(w.ones_in(c)) % 2 for c in range(CONTEXT_COUNT)))


CANONICAL_CLASS1_WEIGHT = IncidenceWeight.from_pairs([(0, 0)])


@dataclass(frozen=True)
class Move:
    """One normalization step; always flips exactly two incidence bits."""

    kind: str  # "cancel" | "rotate" | "transfer"
    flips: Tuple[Tuple[int, int], ...]
    after: IncidenceWeight

    def describe(self) -> str:
        parts = [f"{CONTEXT_NAMES[c]}:{MEASUREMENT_LABELS[m]}" for c, m in self.flips]
        return f"{self.kind} " + " ".join(parts)


class _Normalizer:
    def __init__(self, w: IncidenceWeight):
        self.current = w
        self.moves: List[Move] = []

    def apply(self, kind: str, flips: Sequence[Tuple[int, int]]) -> None:
        self.current = self.current.flipped(flips)
        self.moves.append(Move(kind, tuple(flips), self.current))

    def cancel_within(self, c: int) -> None:
        ones = self.current.ones_in(c)
        while len(ones) >= 2:
            self.apply("cancel", [(c, ones[0]), (c, ones[1])])
            ones = self.current.ones_in(c)

    def rotate(self, c: int, target: int) -> None:
        ones = self.current.ones_in(c)
        if ones and ones[0] != target and target not in ones:
            self.apply("rotate", [(c, ones[0]), (c, target)])

    def transfer(self, c: int, d: int) -> None:
        m = shared_measurement(c, d)
        self.rotate(c, m)
        self.apply("transfer", [(c, m), (d, m)])
        self.cancel_within(d)

    def carriers(self) -> List[int]:
        return [c for c in range(CONTEXT_COUNT) if self.current.ones_in(c)]

    def run(self) -> None:
        for c in range(CONTEXT_COUNT):
            self.cancel_within(c)
        while len(self.carriers()) > 1:
            carriers = self.carriers()
            hors = [c for c in carriers if is_horizontal(c)]
            vers = [c for c in carriers if not is_horizontal(c)]
            if hors and vers:
                c1, c2 = hors[0], vers[0]
                m = shared_measurement(c1, c2)
                self.rotate(c1, m)
                self.rotate(c2, m)
                self.apply("transfer", [(c1, m), (c2, m)])
            else:
                c1 = carriers[0]
                self.transfer(c1, 3 if is_horizontal(c1) else 0)
        carriers = self.carriers()
        if not carriers:
            return
        c = carriers[0]
        if c != 0 and not is_horizontal(c):
            self.transfer(c, 0)
        elif c != 0:
            self.transfer(c, 3)
            self.transfer(3, 0)
        self.rotate(0, 0)


def normalize_incidence_weight(w: IncidenceWeight) -> Tuple[IncidenceWeight, List[Move]]:
    """Reduce a weight to the all-zero form or the single bit at (hor_0, m_00)."""
    normalizer = _Normalizer(w)
    normalizer.run()
    return normalizer.current, normalizer.moves


def measurement_flips(moves: Sequence[Move]) -> FrozenSet[int]:
    """Measurements whose sign a move sequence negates.

    A transfer flips one measurement in both of its contexts; cancel and
    rotate keep every context parity.
    """
    flips: set = set()
    for move in moves:
        if move.kind == "transfer":
            flips ^= {move.flips[0][1]}
    return frozenset(flips)


def flip_beta(beta: BetaAssignment, flips: Iterable[int]) -> BetaAssignment:
    values = list(beta.values)
    for m in flips:
        for c in contexts_of(m):
            values[c] ^= 1
    return BetaAssignment(tuple(values))


def flips_between(beta: BetaAssignment, other: BetaAssignment) -> Optional[FrozenSet[int]]:
    """Smallest measurement set whose negation carries beta to other, None across classes."""
    if beta.cohomology_class != other.cohomology_class:
        return None
    for size in range(MEASUREMENT_COUNT + 1):
        for flips in itertools.combinations(range(MEASUREMENT_COUNT), size):
            if flip_beta(beta, flips) == other:
                return frozenset(flips)
    return None


def random_incidence_weight(rng: random.Random) -> IncidenceWeight:
    return IncidenceWeight(tuple(rng.randint(0, 1) for _ in INCIDENCES))
