import random
from fractions import Fraction

import pytest

from merminpoly.errors import InputFormatError
from merminpoly.exactla import (
    ExactMatrix,
    canonical_system,
    feasible_point,
    fm_eliminate,
    fm_feasible,
    format_rational,
    inverse,
    normalize_inequality,
    parse_rational,
    rank,
    rank_of_rows,
    satisfies,
    solve_affine,
    to_fraction,
    vector,
)

F = Fraction


@pytest.mark.parametrize("text,value", [("3", F(3)), ("-1/2", F(-1, 2)), ("4/6", F(2, 3)), (" 7/1 ", F(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "a/b", "1/-2", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(InputFormatError):
        parse_rational(text)


def test_format_rational():
    assert format_rational(F(3)) == "3"
    assert format_rational(F(-2, 4)) == "-1/2"


def test_to_fraction_refuses_floats_and_bools():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)
    assert vector([1, "1/3", F(2, 5)]) == (F(1), F(1, 3), F(2, 5))


def test_matrix_shape_checked():
    with pytest.raises(ValueError):
        ExactMatrix.from_rows([[1, 2], [3]])


def test_rank():
    m = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    assert rank_of_rows([[F(1, 2), 0], [0, F(1, 3)]], 2) == 2
    assert rank_of_rows([], 4) == 0


def test_solve_affine_statuses():
    unique = solve_affine(ExactMatrix.from_rows([[2, 1], [1, -1]]), [3, 0])
    assert unique.is_unique
    assert unique.point == (F(1), F(1))

    assert solve_affine(ExactMatrix.from_rows([[1, 1], [2, 2]]), [1, 2]).status == "underdetermined"
    assert solve_affine(ExactMatrix.from_rows([[1, 1], [1, 1]]), [1, 2]).status == "inconsistent"


def test_inverse():
    m = ExactMatrix.from_rows([[2, 1], [1, 1]])
    inv = inverse(m)
    assert inv.rows == ((F(1), F(-1)), (F(-1), F(2)))
    with pytest.raises(ValueError):
        inverse(ExactMatrix.from_rows([[1, 2], [2, 4]]))


def test_feasible_point_inside_simplex():
    # x >= 0, y >= 0, x + y <= 1, x - y == 1/2
    ineqs = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)]
    eqs = [((1, -1), F(1, 2))]
    x = feasible_point(ineqs, eqs)
    assert x is not None
    assert satisfies([(vector(a), F(b)) for a, b in ineqs], x, [(vector(c), d) for c, d in eqs])


def test_feasible_point_free_variables():
    x = feasible_point([((1,), -3), ((-1,), 1)])
    assert x is not None and -3 <= x[0] <= -1


def test_feasible_point_infeasible():
    assert feasible_point([((1, 0), 1), ((-1, 0), 0)]) is None
    assert feasible_point([], [((0, 0), 1)]) is None


def test_normalize_inequality():
    assert normalize_inequality((F(1, 2), F(3, 2)), F(1)) == ((F(1), F(3)), F(2))
    assert normalize_inequality((0, 0), 5) == ((F(0), F(0)), F(1))


def test_canonical_system_drops_trivial_and_duplicates():
    system = canonical_system([((2, 0), 2), ((1, 0), 1), ((0, 0), -4)])
    assert system == [((F(1), F(0)), F(1))]


def test_fm_eliminate_projects_triangle():
    # x >= 0, y >= 0, x + y <= 1; eliminating y leaves 0 <= x <= 1
    system = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)]
    projected = fm_eliminate(system, 1)
    assert set(projected) == {((F(1), F(0)), F(0)), ((F(-1), F(0)), F(-1))}


def test_fm_eliminate_rejects_bad_index():
    with pytest.raises(ValueError):
        fm_eliminate([((1, 0), 0)], 2)


def test_fm_feasible():
    assert fm_feasible([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])
    assert not fm_feasible([((1, 1), 2), ((-1, 0), 0), ((0, -1), 0)])


def test_rank_equals_rank_of_transpose():
    rng = random.Random(17)
    for _ in range(100):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(ncols)] for _ in range(nrows)]
        m = ExactMatrix.from_rows(rows, ncols=ncols)
        assert rank(m) == rank(m.transpose())


def test_simplex_and_elimination_agree_on_feasibility():
    rng = random.Random(23)
    feasible = 0
    for _ in range(120):
        dim = rng.randint(1, 3)
        ineqs = [
            (vector([rng.randint(-2, 2) for _ in range(dim)]), F(rng.randint(-3, 3)))
            for _ in range(rng.randint(2, 5))
        ]
        point = feasible_point(ineqs)
        assert (point is not None) == fm_feasible(ineqs)
        if point is not None:
            feasible += 1
            assert satisfies(ineqs, point)
    assert 0 < feasible < 120
