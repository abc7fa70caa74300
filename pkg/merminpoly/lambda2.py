"""
lambda2.py
Two-qubit stabilizer geometry and the (2,3,2) Bell scenario: maximal
isotropic subspaces, the 60 stabilizer projectors, the ext map into MP_1 and
the membership test for Lambda_2 with an operator-side cross-check.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import Rational, eye

from .errors import CriteriaDisagreementError, NonsignalingViolationError, VerificationError
from .exactla import Vector, vector
from .mermin import (
    OUTCOME_PAIRS,
    QUARTER,
    MerminDistribution,
    dist_from_expectations,
    dist_from_marginals,
    parity_sign,
    random_weights,
)
from .polytope import HPolytope, VertexSet, is_vertex, vertices_of
from .scenario import CONTEXT_COUNT, CONTEXTS, BetaAssignment
from .symmetry import (
    ALL_LABELS,
    LOCAL_LABELS,
    NONLOCAL_LABELS,
    derive_pauli_grid,
    labels_commute,
    pauli_coefficients,
    pauli_matrix,
)

logger = logging.getLogger(__name__)

SETTING_LETTERS = "XYZ"
SETTING_PAIRS: Tuple[Tuple[int, int], ...] = tuple((i, j) for i in range(3) for j in range(3))


def _exact(value) -> Fraction:
    value = sympy.expand(value)
    if not value.is_rational:
        raise VerificationError(f"expected a rational trace, got {value}")
    return Fraction(int(value.p), int(value.q))


def _product_label(a: str, b: str) -> Tuple[str, int]:
    """Label and sign of the Hermitian operator A B for commuting A, B."""
    coeffs = pauli_coefficients(pauli_matrix(a) * pauli_matrix(b))
    (label, c), = coeffs.items()
    return label, int(c)


# Pauli coefficients ----------------------------------------------------------------------


@dataclass(frozen=True)
class PauliCoefficients:
    """rho = 1/4 sum_A alpha_A A, alpha indexed by ALL_LABELS."""

    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(ALL_LABELS):
            raise ValueError("Pauli coefficients carry 16 entries")
        if self.values[0] != 1:
            raise ValueError("the identity coefficient of a trace-one operator is 1")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, object]) -> "PauliCoefficients":
        values = {label: Fraction(0) for label in ALL_LABELS}
        values["II"] = Fraction(1)
        for label, v in mapping.items():
            if label not in values:
                raise ValueError(f"unknown Pauli label '{label}'")
            values[label] = vector([v])[0]
        return cls(tuple(values[label] for label in ALL_LABELS))

    def __getitem__(self, label: str) -> Fraction:
        return self.values[ALL_LABELS.index(label)]

    def as_mapping(self, nonzero_only: bool = False) -> Dict[str, Fraction]:
        return {
            label: v for label, v in zip(ALL_LABELS, self.values)
            if not nonzero_only or v != 0
        }

    def matrix(self) -> sympy.Matrix:
        rho = sympy.zeros(4, 4)
        for label, v in zip(ALL_LABELS, self.values):
            if v:
                rho += Rational(v.numerator, v.denominator) * pauli_matrix(label)
        return rho / 4


def uniform_coefficients() -> PauliCoefficients:
    return PauliCoefficients.from_mapping({})


def mermin_expectations(c: PauliCoefficients) -> Vector:
    grid = derive_pauli_grid()
    return tuple(c[label] for label in grid.labels)


def coefficients_from_mermin(e: Sequence[Fraction]) -> PauliCoefficients:
    grid = derive_pauli_grid()
    return PauliCoefficients.from_mapping(dict(zip(grid.labels, vector(e))))


def project_nonlocal(c: PauliCoefficients) -> PauliCoefficients:
    return PauliCoefficients.from_mapping({label: c[label] for label in NONLOCAL_LABELS})


# Isotropic subspaces and projectors --------------------------------------------------------


@dataclass(frozen=True)
class IsotropicSubspace:
    """Three commuting Paulis; the first two generate, the third is +-their product."""

    labels: Tuple[str, str, str]
    beta: int
    local: bool

    @property
    def generators(self) -> Tuple[str, str]:
        return self.labels[0], self.labels[1]

    @property
    def members(self) -> frozenset:
        return frozenset(self.labels)


def _isotropic(first: str, second: str, local: bool) -> IsotropicSubspace:
    third, sign = _product_label(first, second)
    return IsotropicSubspace((first, second, third), 0 if sign > 0 else 1, local)


@lru_cache(maxsize=None)
def enumerate_isotropics() -> Tuple[IsotropicSubspace, ...]:
    """Local ones ordered by setting pair, then nonlocal ones in grid context order."""
    nonzero = [l for l in ALL_LABELS if l != "II"]
    spans = set()
    for a, b in itertools.combinations(nonzero, 2):
        if labels_commute(a, b):
            spans.add(frozenset({a, b, _product_label(a, b)[0]}))
    local = [_isotropic(SETTING_LETTERS[i] + "I", "I" + SETTING_LETTERS[j], True) for i, j in SETTING_PAIRS]
    grid = derive_pauli_grid()
    nonlocal_ = []
    for c in range(CONTEXT_COUNT):
        x, y, _ = grid.context_labels(c)
        nonlocal_.append(_isotropic(x, y, False))
    result = tuple(local + nonlocal_)
    if {s.members for s in result} != spans or len(spans) != 15:
        raise VerificationError(f"found {len(spans)} maximal isotropics, expected the 9 + 6 catalogued")
    return result


@dataclass(frozen=True)
class StabilizerProjector:
    isotropic: IsotropicSubspace
    signs: Tuple[int, int]

    @property
    def local(self) -> bool:
        return self.isotropic.local

    def coefficients(self) -> Dict[str, int]:
        first, second, third = self.isotropic.labels
        a, b = self.signs
        return {
            "II": 1,
            first: parity_sign(a),
            second: parity_sign(b),
            third: parity_sign(a + b + self.isotropic.beta),
        }

    def matrix(self) -> sympy.Matrix:
        total = sympy.zeros(4, 4)
        for label, s in self.coefficients().items():
            total += s * pauli_matrix(label)
        return total / 4

    def name(self) -> str:
        first, second, _ = self.isotropic.labels
        a, b = self.signs
        return f"{'-' if a else '+'}{first}{'-' if b else '+'}{second}"


@lru_cache(maxsize=None)
def enumerate_stabilizer_projectors() -> Tuple[StabilizerProjector, ...]:
    projectors = []
    for iso in enumerate_isotropics():
        total = sympy.zeros(4, 4)
        for signs in OUTCOME_PAIRS:
            proj = StabilizerProjector(iso, signs)
            m = proj.matrix()
            if (m * m - m).expand() != sympy.zeros(4, 4) or sympy.expand(m.trace()) != 1:
                raise VerificationError(f"{proj.name()} is not a rank-one projector")
            total += m
            projectors.append(proj)
        if (total - eye(4)).expand() != sympy.zeros(4, 4):
            raise VerificationError(f"characters of {iso.labels} do not resolve the identity")
    logger.info("built %d stabilizer projectors", len(projectors))
    return tuple(projectors)


@lru_cache(maxsize=None)
def overlap_table() -> Dict[Tuple[str, int], Fraction]:
    """Exact Tr(A Pi) for every Pauli label A and projector index."""
    table = {}
    for k, proj in enumerate(enumerate_stabilizer_projectors()):
        m = proj.matrix()
        for label in ALL_LABELS:
            table[(label, k)] = _exact((pauli_matrix(label) * m).trace())
    return table


def pauli_expectations(projector_index: int) -> PauliCoefficients:
    table = overlap_table()
    return PauliCoefficients.from_mapping({label: table[(label, projector_index)] for label in ALL_LABELS})


def trace_with_projector(c: PauliCoefficients, projector_index: int) -> Fraction:
    table = overlap_table()
    return QUARTER * sum((c[label] * table[(label, projector_index)] for label in ALL_LABELS), Fraction(0))


# The (2,3,2) Bell scenario -------------------------------------------------------------------


@dataclass(frozen=True)
class NS232Distribution:
    """Tables p_{A_i B_j}^{ab} for i, j over X, Y, Z, in SETTING_PAIRS order."""

    tables: Tuple[Tuple[Fraction, Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        if len(self.tables) != 9 or any(len(t) != 4 for t in self.tables):
            raise ValueError("an NS(2,3,2) distribution has nine tables of four entries")

    @classmethod
    def from_mapping(cls, mapping: Mapping[Tuple[int, int], Sequence]) -> "NS232Distribution":
        return cls(tuple(vector(mapping[ij]) for ij in SETTING_PAIRS))

    def table(self, i: int, j: int):
        return self.tables[3 * i + j]

    def entry(self, i: int, j: int, a: int, b: int) -> Fraction:
        return self.table(i, j)[2 * a + b]

    def marginal_a(self, i: int, j: int, outcome: int) -> Fraction:
        return self.entry(i, j, outcome, 0) + self.entry(i, j, outcome, 1)

    def marginal_b(self, i: int, j: int, outcome: int) -> Fraction:
        return self.entry(i, j, 0, outcome) + self.entry(i, j, 1, outcome)

    def xor_marginal(self, i: int, j: int) -> Fraction:
        return self.entry(i, j, 0, 0) + self.entry(i, j, 1, 1)

    def check(self) -> None:
        for i, j in SETTING_PAIRS:
            table = self.table(i, j)
            name = SETTING_LETTERS[i] + SETTING_LETTERS[j]
            if sum(table, Fraction(0)) != 1:
                raise NonsignalingViolationError(f"table {name} does not sum to 1")
            if any(v < 0 for v in table):
                raise NonsignalingViolationError(f"table {name} has a negative entry")
        for k in range(3):
            if len({self.marginal_a(k, j, 0) for j in range(3)}) != 1:
                raise NonsignalingViolationError(f"marginal of {SETTING_LETTERS[k]}1 depends on the context")
            if len({self.marginal_b(i, k, 0) for i in range(3)}) != 1:
                raise NonsignalingViolationError(f"marginal of 1{SETTING_LETTERS[k]} depends on the context")

    def expectations(self) -> Vector:
        """<A_i>, <B_j>, then the nine correlators <A_i B_j>."""
        alice = [2 * self.marginal_a(i, 0, 0) - 1 for i in range(3)]
        bob = [2 * self.marginal_b(0, j, 0) - 1 for j in range(3)]
        corr = [2 * self.xor_marginal(i, j) - 1 for i, j in SETTING_PAIRS]
        return tuple(alice + bob + corr)


def ns232_from_expectations(e: Sequence[Fraction]) -> NS232Distribution:
    e = vector(e)
    tables = []
    for i, j in SETTING_PAIRS:
        x, y, c = e[i], e[3 + j], e[6 + 3 * i + j]
        tables.append(tuple(
            (1 + parity_sign(a) * x + parity_sign(b) * y + parity_sign(a + b) * c) * QUARTER for a, b in OUTCOME_PAIRS
        ))
    return NS232Distribution(tuple(tables))


def ns232_from_coefficients(c: PauliCoefficients) -> NS232Distribution:
    """Born rule for the local Pauli measurements A_i (x) 1 and 1 (x) B_j."""
    alice = [c[letter + "I"] for letter in SETTING_LETTERS]
    bob = [c["I" + letter] for letter in SETTING_LETTERS]
    corr = [c[SETTING_LETTERS[i] + SETTING_LETTERS[j]] for i, j in SETTING_PAIRS]
    return ns232_from_expectations(alice + bob + corr)


def born_distribution(projector_index: int) -> NS232Distribution:
    return ns232_from_coefficients(pauli_expectations(projector_index))


def mermin_born_distribution(projector_index: int) -> MerminDistribution:
    """Born distribution of the nonlocal Pauli contexts, read as a point of MP_1."""
    return dist_from_expectations(mermin_expectations(pauli_expectations(projector_index)), BetaAssignment.beta1())


def uniform_ns232() -> NS232Distribution:
    return ns232_from_expectations([0] * 15)


def deterministic_ns232(alice: Sequence[int], bob: Sequence[int]) -> NS232Distribution:
    tables = []
    for i, j in SETTING_PAIRS:
        tables.append(tuple(Fraction(int((alice[i] % 2, bob[j] % 2) == ab)) for ab in OUTCOME_PAIRS))
    return NS232Distribution(tuple(tables))


def deterministic_ns232_points() -> List[NS232Distribution]:
    return [
        deterministic_ns232(alice, bob)
        for alice in itertools.product((0, 1), repeat=3)
        for bob in itertools.product((0, 1), repeat=3)
    ]


def mix_ns232(parts: Sequence[NS232Distribution], weights: Sequence[Fraction]) -> NS232Distribution:
    tables = []
    for t in range(9):
        tables.append(tuple(
            sum((w * part.tables[t][e] for w, part in zip(weights, parts)), Fraction(0)) for e in range(4)
        ))
    return NS232Distribution(tuple(tables))


def random_ns232(rng: random.Random, max_denominator: int = 12) -> NS232Distribution:
    """Rational mixture of deterministic boxes and stabilizer-state distributions."""
    projectors = enumerate_stabilizer_projectors()
    parts = [
        deterministic_ns232([rng.randint(0, 1) for _ in range(3)], [rng.randint(0, 1) for _ in range(3)])
        for _ in range(rng.randint(0, 2))
    ]
    parts += [born_distribution(rng.randrange(len(projectors))) for _ in range(rng.randint(1, 3))]
    return mix_ns232(parts, random_weights(rng, len(parts), max_denominator))


# ext and membership ----------------------------------------------------------------------------


def _setting_of(label: str) -> Tuple[int, int]:
    return SETTING_LETTERS.index(label[0]), SETTING_LETTERS.index(label[1])


def ext(d: NS232Distribution) -> MerminDistribution:
    """Quasi-distribution on the Mermin contexts built edge by edge from the XOR marginals."""
    grid = derive_pauli_grid()
    zero_marginals = [d.xor_marginal(*_setting_of(label)) for label in grid.labels]
    beta = BetaAssignment.beta1()
    tables = tuple(
        dist_from_marginals([zero_marginals[m] for m in CONTEXTS[c]], beta[c]) for c in range(CONTEXT_COUNT)
    )
    return MerminDistribution(beta, tables)


@dataclass
class MembershipVerdict:
    member: bool
    extension: MerminDistribution
    negative_entry: Optional[Tuple[int, int, int, Fraction]] = None


def lambda2_member(d: NS232Distribution) -> MembershipVerdict:
    extended = ext(d)
    negative = extended.first_negative()
    return MembershipVerdict(negative is None, extended, negative)


def rho_from(d: NS232Distribution) -> PauliCoefficients:
    grid = derive_pauli_grid()
    e = d.expectations()
    values: Dict[str, Fraction] = {}
    for k, letter in enumerate(SETTING_LETTERS):
        values[letter + "I"] = e[k]
        values["I" + letter] = e[3 + k]
    extended = ext(d)
    for c, ctx in enumerate(CONTEXTS):
        for position, m in enumerate(ctx):
            values[grid.labels[m]] = extended.marginal(c, position, 0) - extended.marginal(c, position, 1)
    return PauliCoefficients.from_mapping(values)


@dataclass
class CrossCheckReport:
    verdict: MembershipVerdict
    operator_member: bool
    min_trace: Fraction
    violating_projector: Optional[str]

    @property
    def member(self) -> bool:
        return self.verdict.member

    @property
    def agree(self) -> bool:
        return self.verdict.member == self.operator_member


def membership_cross_check(d: NS232Distribution) -> CrossCheckReport:
    d.check()
    verdict = lambda2_member(d)
    rho = rho_from(d)
    projectors = enumerate_stabilizer_projectors()
    traces = [trace_with_projector(rho, k) for k in range(len(projectors))]
    worst = min(range(len(traces)), key=lambda k: (traces[k], k))
    operator_member = traces[worst] >= 0
    report = CrossCheckReport(
        verdict,
        operator_member,
        traces[worst],
        None if operator_member else projectors[worst].name(),
    )
    if not report.agree:
        raise CriteriaDisagreementError(
            f"ext says member={verdict.member} but projector test says {operator_member}"
        )
    return report


@dataclass
class Lambda2Summary:
    stabilizer_members: int
    deterministic_nonmembers: int
    random_samples: int
    random_members: int

    @property
    def passed(self) -> bool:
        return self.stabilizer_members == 60 and self.deterministic_nonmembers == 64


def run_lambda2_checks(samples: int, seed: int) -> Lambda2Summary:
    rng = random.Random(seed)
    stabilizer = sum(
        membership_cross_check(born_distribution(k)).member for k in range(len(enumerate_stabilizer_projectors()))
    )
    deterministic = sum(not membership_cross_check(d).member for d in deterministic_ns232_points())
    members = sum(membership_cross_check(random_ns232(rng)).member for _ in range(samples))
    logger.info("lambda2: %d/%d random members", members, samples)
    return Lambda2Summary(stabilizer, deterministic, samples, members)


# Nonsignaling polytopes -------------------------------------------------------------------------


def ns_bell_h_rep(settings: int = 3) -> HPolytope:
    """NS(2, n, 2) in expectation coordinates: n + n marginals, then n*n correlators."""
    n = settings
    dim = 2 * n + n * n
    rows, labels = [], []
    for i in range(n):
        for j in range(n):
            for a, b in OUTCOME_PAIRS:
                row = [0] * dim
                row[i] = parity_sign(a)
                row[n + j] = parity_sign(b)
                row[2 * n + n * i + j] = parity_sign(a + b)
                rows.append((row, -1))
                labels.append(f"A{i}B{j}:{a}{b}")
    cols = [f"A{i}" for i in range(n)] + [f"B{j}" for j in range(n)]
    cols += [f"A{i}B{j}" for i in range(n) for j in range(n)]
    return HPolytope.from_inequalities(rows, dim, labels, cols)


@dataclass
class NSVertexReport:
    settings: int
    vertices: VertexSet
    deterministic: int
    nonlocal_count: int

    @property
    def total(self) -> int:
        return len(self.vertices)


def enumerate_ns_vertices(settings: int = 3, method: str = "dd", workers: int = 1) -> NSVertexReport:
    p = ns_bell_h_rep(settings)
    vertices = vertices_of(p, method, workers)
    for v in vertices:
        if not is_vertex(p, v):
            raise VerificationError("enumeration returned a non-extremal point")
    deterministic = sum(1 for v in vertices if all(abs(x) == 1 for x in v))
    logger.info("NS(2,%d,2): %d vertices, %d deterministic", settings, len(vertices), deterministic)
    return NSVertexReport(settings, vertices, deterministic, len(vertices) - deterministic)


def enumerate_ns232_vertices(method: str = "dd", workers: int = 1) -> NSVertexReport:
    return enumerate_ns_vertices(3, method, workers)


def locality_split() -> Dict[str, int]:
    projectors = enumerate_stabilizer_projectors()
    isotropics = enumerate_isotropics()
    return {
        "labels_identity": 1,
        "labels_local": len(LOCAL_LABELS),
        "labels_nonlocal": len(NONLOCAL_LABELS),
        "isotropics_local": sum(1 for s in isotropics if s.local),
        "isotropics_nonlocal": sum(1 for s in isotropics if not s.local),
        "projectors_local": sum(1 for p in projectors if p.local),
        "projectors_nonlocal": sum(1 for p in projectors if not p.local),
    }
