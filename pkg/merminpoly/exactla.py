"""
exactla.py
Exact rational linear algebra: matrices over Fraction, fraction-free rank and
solving, phase-1 simplex feasibility and Fourier-Motzkin elimination.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InputFormatError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]
# a . x >= b
Inequality = Tuple[Vector, Fraction]
# c . x == d
Equation = Tuple[Vector, Fraction]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = str(text).strip()
    if not _RATIONAL_RE.match(text):
        raise InputFormatError(f"'{text}' is not a rational of the form p/q")
    value = Fraction(text)
    return value


def dot(a: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(row: Sequence[Fraction]) -> List[int]:
    """Scale a rational row by the lcm of its denominators."""
    scale = 1
    for v in row:
        scale = _lcm(scale, Fraction(v).denominator)
    return [int(Fraction(v) * scale) for v in row]


def primitive_row(row: Sequence[int]) -> List[int]:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g in (0, 1):
        return list(row)
    return [v // g for v in row]


@dataclass(frozen=True)
class ExactMatrix:
    """Rectangular matrix of Fractions with optional order-stable labels."""

    rows: Tuple[Vector, ...]
    ncols: int
    row_labels: Optional[Tuple[str, ...]] = None
    col_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError(f"row of length {len(row)} in a matrix with {self.ncols} columns")
        if self.row_labels is not None and len(self.row_labels) != len(self.rows):
            raise ValueError("row label count does not match row count")
        if self.col_labels is not None and len(self.col_labels) != self.ncols:
            raise ValueError("column label count does not match column count")

    @classmethod
    def from_rows(cls, rows, ncols: Optional[int] = None, row_labels=None, col_labels=None) -> "ExactMatrix":
        converted = tuple(vector(r) for r in rows)
        if ncols is None:
            if not converted:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(converted[0])
        return cls(
            rows=converted,
            ncols=ncols,
            row_labels=tuple(row_labels) if row_labels is not None else None,
            col_labels=tuple(col_labels) if col_labels is not None else None,
        )

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def transpose(self) -> "ExactMatrix":
        cols = tuple(tuple(row[j] for row in self.rows) for j in range(self.ncols))
        return ExactMatrix(
            rows=cols,
            ncols=self.nrows,
            row_labels=self.col_labels,
            col_labels=self.row_labels,
        )

    def select_rows(self, indices: Iterable[int]) -> "ExactMatrix":
        indices = list(indices)
        labels = tuple(self.row_labels[i] for i in indices) if self.row_labels else None
        return ExactMatrix(
            rows=tuple(self.rows[i] for i in indices),
            ncols=self.ncols,
            row_labels=labels,
            col_labels=self.col_labels,
        )

    def apply(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.ncols:
            raise ValueError("dimension mismatch")
        return tuple(dot(row, x) for row in self.rows)


def bareiss_echelon(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form of integer rows.

    Only the first ``ncols`` columns are searched for pivots; extra trailing
    columns (an augmented right-hand side) are carried along. Returns the
    reduced rows, including the zero rows below the pivots, and the pivot
    columns.
    """
    m = [list(r) for r in rows]
    pivots: List[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot_row = m[r]
        piv = pivot_row[c]
        for i in range(r + 1, len(m)):
            row_i = m[i]
            lead = row_i[c]
            for k in range(c + 1, len(row_i)):
                row_i[k] = (row_i[k] * piv - lead * pivot_row[k]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m: ExactMatrix) -> int:
    """Exact rank over the rationals."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    _, pivots = bareiss_echelon([integer_row(row) for row in m.rows], m.ncols)
    return len(pivots)


def rank_of_rows(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return rank(ExactMatrix.from_rows(rows, ncols=ncols))


@dataclass(frozen=True)
class AffineSolution:
    status: str  # "unique" | "underdetermined" | "inconsistent"
    point: Optional[Vector] = None

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"


def solve_affine(m: ExactMatrix, rhs: Sequence) -> AffineSolution:
    """Solve m.x = rhs exactly for a square or overdetermined system."""
    rhs = vector(rhs)
    if len(rhs) != m.nrows:
        raise ValueError("right-hand side length does not match row count")
    augmented = [integer_row(tuple(row) + (b,)) for row, b in zip(m.rows, rhs)]
    echelon, pivots = bareiss_echelon(augmented, m.ncols)
    r = len(pivots)
    for row in echelon[r:]:
        if row[-1] != 0:
            return AffineSolution("inconsistent")
    if r < m.ncols:
        return AffineSolution("underdetermined")

    n = m.ncols
    x: List[Fraction] = [Fraction(0)] * n
    for idx in reversed(range(r)):
        row = echelon[idx]
        c = pivots[idx]
        s = Fraction(row[-1]) - sum((row[k] * x[k] for k in range(c + 1, n)), Fraction(0))
        x[c] = s / row[c]
    return AffineSolution("unique", tuple(x))


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Inverse of a nonsingular square matrix (Gauss-Jordan over Fractions)."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("only square matrices have inverses")
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        work[c], work[p] = work[p], work[c]
        piv = work[c][c]
        work[c] = [v / piv for v in work[c]]
        for i in range(n):
            if i != c and work[i][c] != 0:
                f = work[i][c]
                work[i] = [v - f * w for v, w in zip(work[i], work[c])]
    return ExactMatrix.from_rows([row[n:] for row in work], ncols=n)


# Phase-1 simplex ------------------------------------------------------------


def _pivot(tableau: List[List[Fraction]], cost: List[Fraction], r: int, c: int) -> None:
    pivot_row = tableau[r]
    pv = pivot_row[c]
    if pv != 1:
        pivot_row[:] = [v / pv for v in pivot_row]
    for i, row in enumerate(tableau):
        if i != r and row[c] != 0:
            f = row[c]
            tableau[i] = [v - f * p for v, p in zip(row, pivot_row)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [v - f * p for v, p in zip(cost, pivot_row)]


def _phase_one(rows: List[List[Fraction]], rhs: List[Fraction], width: int) -> Optional[List[Fraction]]:
    """Find y >= 0 with rows . y = rhs (rhs >= 0) using Bland's rule."""
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * width
    total = width + m
    tableau = []
    for i, row in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tableau.append(list(row) + art + [rhs[i]])
    basis = [width + i for i in range(m)]

    # reduced costs of "minimize the sum of artificials"; last entry is -objective
    cost = [Fraction(0)] * (total + 1)
    for j in range(width):
        cost[j] = -sum((tableau[i][j] for i in range(m)), Fraction(0))
    cost[total] = -sum(rhs, Fraction(0))

    pivots = 0
    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(m):
            coef = tableau[i][entering]
            if coef > 0:
                ratio = tableau[i][total] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            break
        _pivot(tableau, cost, leaving, entering)
        basis[leaving] = entering
        pivots += 1

    logger.debug("phase-1 finished after %d pivots", pivots)
    if cost[total] != 0:
        return None
    y = [Fraction(0)] * width
    for i, var in enumerate(basis):
        if var < width:
            y[var] = tableau[i][total]
    return y


def feasible_point(ineqs: Sequence[Inequality], eqs: Sequence[Equation] = ()) -> Optional[Vector]:
    """Exact point with a.x >= b for every inequality and c.x == d for every equation.

    Inequalities of the shape ``k * x_j >= 0`` (k > 0) mark x_j as a
    sign-restricted variable; every other variable is split into a
    difference of two nonnegative parts.
    """
    ineqs = [(vector(a), to_fraction(b)) for a, b in ineqs]
    eqs = [(vector(c), to_fraction(d)) for c, d in eqs]
    dims = {len(a) for a, _ in ineqs} | {len(c) for c, _ in eqs}
    if not dims:
        return ()
    if len(dims) > 1:
        raise ValueError("constraint vectors have different dimensions")
    n = dims.pop()

    nonneg = set()
    general: List[Inequality] = []
    for a, b in ineqs:
        support = [j for j, v in enumerate(a) if v != 0]
        if not support:
            if b > 0:
                return None
            continue
        if len(support) == 1 and a[support[0]] > 0 and b == 0:
            nonneg.add(support[0])
        else:
            general.append((a, b))
    for c, d in eqs:
        if all(v == 0 for v in c) and d != 0:
            return None

    columns: List[Tuple[int, int]] = []
    for j in range(n):
        columns.append((j, 1))
        if j not in nonneg:
            columns.append((j, -1))
    n_struct = len(columns)
    n_slack = len(general)

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for k, (a, b) in enumerate(general):
        row = [sign * a[j] for j, sign in columns] + [Fraction(0)] * n_slack
        row[n_struct + k] = Fraction(-1)
        rows.append(row)
        rhs.append(b)
    for c, d in eqs:
        rows.append([sign * c[j] for j, sign in columns] + [Fraction(0)] * n_slack)
        rhs.append(d)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    y = _phase_one(rows, rhs, n_struct + n_slack)
    if y is None:
        return None
    point = [Fraction(0)] * n
    for col, (j, sign) in enumerate(columns):
        point[j] += sign * y[col]
    return tuple(point)


def satisfies(ineqs: Sequence[Inequality], x: Sequence[Fraction], eqs: Sequence[Equation] = ()) -> bool:
    return all(dot(a, x) >= b for a, b in ineqs) and all(dot(c, x) == d for c, d in eqs)


# Fourier-Motzkin ------------------------------------------------------------


def normalize_inequality(a: Sequence, b) -> Inequality:
    """Positive rescaling to a primitive integer row."""
    ints = primitive_row(integer_row(tuple(vector(a)) + (to_fraction(b),)))
    if all(v == 0 for v in ints[:-1]) and ints[-1] != 0:
        ints[-1] = 1 if ints[-1] > 0 else -1
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


def _is_trivial(ineq: Inequality) -> bool:
    a, b = ineq
    return all(v == 0 for v in a) and b <= 0


def canonical_system(ineqs: Iterable[Inequality]) -> List[Inequality]:
    """Normalize, drop always-true rows, dedupe and sort lexicographically."""
    seen = set()
    for a, b in ineqs:
        row = normalize_inequality(a, b)
        if not _is_trivial(row):
            seen.add(row)
    return sorted(seen)


def fm_eliminate(ineqs: Sequence[Inequality], var_index: int) -> List[Inequality]:
    """Project out variable ``var_index``.

    The output keeps the full dimension with a zero coefficient in the
    eliminated column, so eliminations can be chained.
    """
    system = canonical_system(ineqs)
    if not system:
        return []
    dim = len(system[0][0])
    if not 0 <= var_index < dim:
        raise ValueError(f"variable index {var_index} outside dimension {dim}")

    result: List[Inequality] = []
    lower, upper = [], []
    for a, b in system:
        coef = a[var_index]
        if coef > 0:
            lower.append((a, b))
        elif coef < 0:
            upper.append((a, b))
        else:
            result.append((a, b))
    for ap, bp in lower:
        cp = ap[var_index]
        for an, bn in upper:
            cn = -an[var_index]
            combined = tuple(cn * x + cp * y for x, y in zip(ap, an))
            result.append((combined, cn * bp + cp * bn))
    logger.debug("eliminated x%d: %d lower, %d upper bounds", var_index, len(lower), len(upper))
    return canonical_system(result)


def fm_feasible(ineqs: Sequence[Inequality]) -> bool:
    """Feasibility by eliminating every variable and looking for 0 >= positive."""
    system = canonical_system(ineqs)
    if not system:
        return True
    for j in range(len(system[0][0])):
        system = fm_eliminate(system, j)
    return not any(b > 0 for _, b in system)
