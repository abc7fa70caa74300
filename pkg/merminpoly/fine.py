"""
fine.py
The CHSH scenario read as the punctured Mermin torus: CHSH values, the diamond
extension interval, deterministic decompositions, torus extensions and the
three-way noncontextuality check.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import CriteriaDisagreementError, NonsignalingViolationError
from .exactla import Inequality, canonical_system, feasible_point, fm_eliminate, to_fraction, vector
from .mermin import (
    HALF,
    OUTCOME_PAIRS,
    MerminDistribution,
    decompose_mp0,
    dist_from_expectations,
    dist_from_marginals,
    expectations_from_dist,
    mermin_member,
    random_weights,
)
from .scenario import CHSH_VARIABLES, CONTEXT_COUNT, CONTEXTS, MEASUREMENT_COUNT, TORUS_VARIABLES, BetaAssignment

logger = logging.getLogger(__name__)

# (i, j) for the contexts x_i y_j
CHSH_CONTEXTS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))

# grid context holding x_i y_j, and whether its first two slots read (y_j, x_i)
_TORUS_CONTEXT = {(0, 0): (0, False), (1, 1): (1, True), (0, 1): (3, False), (1, 0): (4, True)}

# measurement carrying x_i + y_j
_XOR_MEASUREMENT = {(0, 0): 2, (1, 1): 5, (0, 1): 6, (1, 0): 7}
Z_MEASUREMENT = 8

Table = Tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class ChshDistribution:
    """Tables p_{x_i y_j}^{ab} keyed by (i, j), entries in the order 00, 01, 10, 11."""

    tables: Tuple[Table, ...]

    def __post_init__(self):
        if len(self.tables) != 4 or any(len(t) != 4 for t in self.tables):
            raise ValueError("a CHSH distribution has four tables of four entries")

    @classmethod
    def from_mapping(cls, mapping: Mapping[Tuple[int, int], Sequence]) -> "ChshDistribution":
        return cls(tuple(vector(mapping[ij]) for ij in CHSH_CONTEXTS))

    def table(self, i: int, j: int) -> Table:
        return self.tables[CHSH_CONTEXTS.index((i, j))]

    def entry(self, i: int, j: int, a: int, b: int) -> Fraction:
        return self.table(i, j)[2 * a + b]

    def marginal_x(self, i: int, j: int, outcome: int) -> Fraction:
        return self.entry(i, j, outcome, 0) + self.entry(i, j, outcome, 1)

    def marginal_y(self, i: int, j: int, outcome: int) -> Fraction:
        return self.entry(i, j, 0, outcome) + self.entry(i, j, 1, outcome)

    def xor_marginal(self, i: int, j: int) -> Fraction:
        """Probability that x_i + y_j reads 0."""
        return self.entry(i, j, 0, 0) + self.entry(i, j, 1, 1)

    def check(self) -> None:
        for i, j in CHSH_CONTEXTS:
            table = self.table(i, j)
            if sum(table, Fraction(0)) != 1:
                raise NonsignalingViolationError(f"table x{i}y{j} does not sum to 1")
            if any(v < 0 for v in table):
                raise NonsignalingViolationError(f"table x{i}y{j} has a negative entry")
        for i in range(2):
            if self.marginal_x(i, 0, 0) != self.marginal_x(i, 1, 0):
                raise NonsignalingViolationError(f"marginal of x{i} depends on the context")
        for j in range(2):
            if self.marginal_y(0, j, 0) != self.marginal_y(1, j, 0):
                raise NonsignalingViolationError(f"marginal of y{j} depends on the context")

    def is_valid(self) -> bool:
        try:
            self.check()
        except NonsignalingViolationError:
            return False
        return True

    def mix(self, other: "ChshDistribution", weight: Fraction) -> "ChshDistribution":
        """weight * self + (1 - weight) * other"""
        w = to_fraction(weight)
        return ChshDistribution(tuple(
            tuple(w * a + (1 - w) * b for a, b in zip(t1, t2)) for t1, t2 in zip(self.tables, other.tables)
        ))


def uniform_chsh() -> ChshDistribution:
    quarter = Fraction(1, 4)
    return ChshDistribution(((quarter,) * 4,) * 4)


CHSH_ASSIGNMENTS: Tuple[Dict[str, int], ...] = tuple(
    dict(zip(CHSH_VARIABLES, bits)) for bits in itertools.product((0, 1), repeat=4)
)


def deterministic_chsh(s: Mapping[str, int]) -> ChshDistribution:
    tables = []
    for i, j in CHSH_CONTEXTS:
        a, b = s[f"x{i}"] % 2, s[f"y{j}"] % 2
        tables.append(tuple(Fraction(int((a, b) == ab)) for ab in OUTCOME_PAIRS))
    return ChshDistribution(tuple(tables))


def pr_box(variant: int = 0) -> ChshDistribution:
    """PR box with a + b = ij + alpha i + beta j + gamma, variant = 4 alpha + 2 beta + gamma."""
    if not 0 <= variant < 8:
        raise ValueError("PR-box variants are numbered 0..7")
    alpha, beta, gamma = variant >> 2 & 1, variant >> 1 & 1, variant & 1
    tables = []
    for i, j in CHSH_CONTEXTS:
        parity = (i * j + alpha * i + beta * j + gamma) % 2
        tables.append(tuple(HALF if (a + b) % 2 == parity else Fraction(0) for a, b in OUTCOME_PAIRS))
    return ChshDistribution(tuple(tables))


def random_chsh(rng: random.Random, max_denominator: int = 12) -> ChshDistribution:
    """Rational mixture of random deterministic assignments and random PR-box variants."""
    parts = [deterministic_chsh(rng.choice(CHSH_ASSIGNMENTS)) for _ in range(rng.randint(1, 3))]
    parts += [pr_box(rng.randrange(8)) for _ in range(rng.randint(0, 2))]
    weights = random_weights(rng, len(parts), max_denominator)
    tables = []
    for k in range(4):
        tables.append(tuple(
            sum((w * part.tables[k][e] for w, part in zip(weights, parts)), Fraction(0)) for e in range(4)
        ))
    return ChshDistribution(tuple(tables))


# CHSH inequalities and the diamond ------------------------------------------------------


def chsh_values(p: ChshDistribution) -> Tuple[Fraction, ...]:
    """Sum of the XOR marginals with the k-th one negated, k over x0y0, x0y1, x1y0, x1y1."""
    xor = [p.xor_marginal(i, j) for i, j in CHSH_CONTEXTS]
    total = sum(xor, Fraction(0))
    return tuple(total - 2 * x for x in xor)


def chsh_satisfied(p: ChshDistribution) -> bool:
    return all(0 <= v <= 2 for v in chsh_values(p))


def first_violated_chsh(p: ChshDistribution) -> Optional[int]:
    for k, v in enumerate(chsh_values(p)):
        if not 0 <= v <= 2:
            return k
    return None


@dataclass(frozen=True)
class DiamondBoundary:
    """Zero-marginals of the four XOR edges around the diamond."""

    d1_first: Fraction   # x0 + y0
    d1_second: Fraction  # x1 + y1
    d2_first: Fraction   # x0 + y1
    d2_second: Fraction  # x1 + y0

    def __post_init__(self):
        if any(not 0 <= v <= 1 for v in self.as_tuple()):
            raise ValueError("diamond marginals lie in [0, 1]")

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return self.d1_first, self.d1_second, self.d2_first, self.d2_second


@dataclass(frozen=True)
class ExtensionInterval:
    lower: Fraction
    upper: Fraction

    @property
    def nonempty(self) -> bool:
        return self.lower <= self.upper


def boundary_of(p: ChshDistribution) -> DiamondBoundary:
    return DiamondBoundary(p.xor_marginal(0, 0), p.xor_marginal(1, 1), p.xor_marginal(0, 1), p.xor_marginal(1, 0))


def diamond_interval(b: DiamondBoundary) -> ExtensionInterval:
    """Admissible zero-marginals of the common edge z of the two triangles."""
    u1, u2, v1, v2 = b.as_tuple()
    lower = max(abs(u1 + u2 - 1), abs(v1 + v2 - 1))
    upper = min(1 - abs(u1 - u2), 1 - abs(v1 - v2))
    return ExtensionInterval(lower, upper)


def fm_chsh_system() -> List[Inequality]:
    """Diamond constraints over (u1, u2, v1, v2, z) together with the unit box on the boundary."""
    rows: List[Tuple[Sequence[int], int]] = []
    for first, second in ((0, 1), (2, 3)):
        def row(cf: int, cs: int, cz: int, b: int) -> Tuple[List[int], int]:
            a = [0] * 5
            a[first], a[second], a[4] = cf, cs, cz
            return a, b
        rows.append(row(-1, -1, 1, -1))   # z >= u1 + u2 - 1
        rows.append(row(1, 1, 1, 1))      # z >= 1 - u1 - u2
        rows.append(row(1, -1, -1, -1))   # z <= 1 + u1 - u2
        rows.append(row(-1, 1, -1, -1))   # z <= 1 - u1 + u2
    for k in range(4):
        unit = [0] * 5
        unit[k] = 1
        rows.append((unit, 0))
        rows.append(([-v for v in unit], -1))
    return canonical_system((vector(a), Fraction(b)) for a, b in rows)


def fm_chsh_inequalities() -> List[Inequality]:
    return fm_eliminate(fm_chsh_system(), 4)


def chsh_probability_rows() -> List[Inequality]:
    """0 <= sum of XOR marginals with one negated <= 2, over (u1, u2, v1, v2, z)."""
    rows = []
    for k in range(4):
        signs = [1, 1, 1, 1]
        signs[k] = -1
        rows.append((tuple(Fraction(s) for s in signs) + (Fraction(0),), Fraction(0)))
        rows.append((tuple(Fraction(-s) for s in signs) + (Fraction(0),), Fraction(-2)))
    return canonical_system(rows)


# Noncontextuality criteria ----------------------------------------------------------------


def is_noncontextual(p: ChshDistribution) -> Optional[Dict[int, Fraction]]:
    """Convex weights over CHSH_ASSIGNMENTS reproducing p, or None."""
    n = len(CHSH_ASSIGNMENTS)
    eqs = []
    for i, j in CHSH_CONTEXTS:
        for a, b in OUTCOME_PAIRS:
            coeffs = tuple(
                Fraction(int(s[f"x{i}"] == a and s[f"y{j}"] == b)) for s in CHSH_ASSIGNMENTS
            )
            eqs.append((coeffs, p.entry(i, j, a, b)))
    eqs.append(((Fraction(1),) * n, Fraction(1)))
    nonneg = [(tuple(Fraction(int(j == k)) for j in range(n)), Fraction(0)) for k in range(n)]
    weights = feasible_point(nonneg, eqs)
    if weights is None:
        return None
    return {k: w for k, w in enumerate(weights) if w != 0}


def remix(weights: Mapping[int, Fraction]) -> ChshDistribution:
    tables = [[Fraction(0)] * 4 for _ in CHSH_CONTEXTS]
    for k, w in weights.items():
        det = deterministic_chsh(CHSH_ASSIGNMENTS[k])
        for t in range(4):
            for e in range(4):
                tables[t][e] += w * det.tables[t][e]
    return ChshDistribution(tuple(tuple(t) for t in tables))


def torus_point(s: Mapping[str, int]) -> Tuple[Fraction, ...]:
    """Expectations of the deterministic torus distribution extending s by XOR values."""
    return tuple(
        Fraction(-1 if sum(s[v] for v in TORUS_VARIABLES[m]) % 2 else 1) for m in range(MEASUREMENT_COUNT)
    )


def extend_deterministic(s: Mapping[str, int]) -> MerminDistribution:
    return dist_from_expectations(torus_point(s), BetaAssignment.beta0())


def restrict_to_chsh(m: MerminDistribution) -> ChshDistribution:
    tables = []
    for ij in CHSH_CONTEXTS:
        context, swapped = _TORUS_CONTEXT[ij]
        if swapped:
            tables.append(tuple(m.entry(context, b, a) for a, b in OUTCOME_PAIRS))
        else:
            tables.append(tuple(m.entry(context, a, b) for a, b in OUTCOME_PAIRS))
    return ChshDistribution(tuple(tables))


def _zero_marginals(p: ChshDistribution, z: Fraction) -> List[Fraction]:
    values = [Fraction(0)] * MEASUREMENT_COUNT
    values[0] = p.marginal_x(0, 0, 0)
    values[4] = p.marginal_x(1, 0, 0)
    values[1] = p.marginal_y(0, 0, 0)
    values[3] = p.marginal_y(0, 1, 0)
    for ij, m in _XOR_MEASUREMENT.items():
        values[m] = p.xor_marginal(*ij)
    values[Z_MEASUREMENT] = z
    return values


def extend_via_diamond(p: ChshDistribution) -> Optional[MerminDistribution]:
    """Glue the diamond at the lower end of its interval and fill every triangle from its marginals."""
    interval = diamond_interval(boundary_of(p))
    if not interval.nonempty:
        return None
    marginals = _zero_marginals(p, interval.lower)
    beta = BetaAssignment.beta0()
    tables = tuple(dist_from_marginals([marginals[m] for m in CONTEXTS[c]], beta[c]) for c in range(CONTEXT_COUNT))
    return MerminDistribution(beta, tables)


def extend_to_torus(p: ChshDistribution) -> Optional[MerminDistribution]:
    weights = is_noncontextual(p)
    if weights is None:
        if diamond_interval(boundary_of(p)).nonempty:
            raise CriteriaDisagreementError("no deterministic decomposition but the diamond extends")
        return None
    e = [Fraction(0)] * MEASUREMENT_COUNT
    for k, w in weights.items():
        for m, v in enumerate(torus_point(CHSH_ASSIGNMENTS[k])):
            e[m] += w * v
    return dist_from_expectations(e, BetaAssignment.beta0())


@dataclass
class FineReport:
    distribution: ChshDistribution
    chsh_values: Tuple[Fraction, ...]
    chsh_satisfied: bool
    interval: ExtensionInterval
    weights: Optional[Dict[int, Fraction]]
    extension: Optional[MerminDistribution]
    diamond_extension: Optional[MerminDistribution]
    torus_decomposition: Optional[Dict[Tuple[Fraction, ...], Fraction]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def noncontextual(self) -> bool:
        return self.weights is not None

    @property
    def agree(self) -> bool:
        verdicts = {
            self.chsh_satisfied,
            self.interval.nonempty,
            self.weights is not None,
            self.extension is not None,
            self.diamond_extension is not None,
        }
        return len(verdicts) == 1


def _check_extension(p: ChshDistribution, ext: MerminDistribution, route: str) -> None:
    e = expectations_from_dist(ext)
    if not mermin_member(e, BetaAssignment.beta0()):
        raise CriteriaDisagreementError(f"{route} extension is not in MP_0")
    if restrict_to_chsh(ext) != p:
        raise CriteriaDisagreementError(f"{route} extension does not restrict to the input")


def fine_check(p: ChshDistribution) -> FineReport:
    p.check()
    weights = is_noncontextual(p)
    report = FineReport(
        distribution=p,
        chsh_values=chsh_values(p),
        chsh_satisfied=chsh_satisfied(p),
        interval=diamond_interval(boundary_of(p)),
        weights=weights,
        extension=extend_to_torus(p),
        diamond_extension=extend_via_diamond(p),
    )
    if not report.agree:
        raise CriteriaDisagreementError(
            f"criteria disagree: chsh={report.chsh_satisfied} diamond={report.interval.nonempty} "
            f"decomposition={weights is not None}"
        )
    if weights is not None:
        if remix(weights) != p:
            raise CriteriaDisagreementError("decomposition weights do not reproduce the distribution")
        _check_extension(p, report.extension, "decomposition")
        _check_extension(p, report.diamond_extension, "diamond")
        report.torus_decomposition = decompose_mp0(expectations_from_dist(report.diamond_extension))
        if report.torus_decomposition is None:
            raise CriteriaDisagreementError("torus extension has no deterministic decomposition")
    else:
        report.notes.append(f"violated CHSH inequality {first_violated_chsh(p)}")
    logger.debug("fine check: noncontextual=%s values=%s", report.noncontextual, report.chsh_values)
    return report


@dataclass
class FineSummary:
    samples: int
    noncontextual: int
    contextual: int
    agreement: int

    @property
    def passed(self) -> bool:
        return self.agreement == self.samples


def run_fine_samples(samples: int, seed: int) -> FineSummary:
    rng = random.Random(seed)
    noncontextual = 0
    for _ in range(samples):
        if fine_check(random_chsh(rng)).noncontextual:
            noncontextual += 1
    logger.info("fine check: %d samples, %d noncontextual", samples, noncontextual)
    # fine_check raises on any disagreement
    return FineSummary(samples, noncontextual, samples - noncontextual, samples)
