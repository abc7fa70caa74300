from fractions import Fraction

import pytest

from merminpoly.errors import EmptyPolytopeError, UnboundedPolytopeError
from merminpoly.polytope import (
    HPolytope,
    are_adjacent,
    build_graph,
    combinatorially_isomorphic,
    contains,
    convex_independent,
    enumerate_vertices,
    enumerate_vertices_dd,
    facets,
    is_vertex,
    negate_columns,
    recession_direction,
    sign_flip_equivalent,
    vertices_of,
)

F = Fraction


def square():
    return HPolytope.from_inequalities([((1, 0), -1), ((-1, 0), -1), ((0, 1), -1), ((0, -1), -1)])


def diamond():
    return HPolytope.from_inequalities([((s, t), -1) for s in (1, -1) for t in (1, -1)])


def triangle():
    return HPolytope.from_inequalities([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])


def cube():
    rows = []
    for j in range(3):
        for sign in (1, -1):
            a = [0, 0, 0]
            a[j] = sign
            rows.append((a, -1))
    return HPolytope.from_inequalities(rows)


def test_rhs_length_checked():
    p = square()
    with pytest.raises(ValueError):
        HPolytope(p.a, p.b[:2])


def test_square_vertices():
    vs = enumerate_vertices_dd(square())
    assert vs.as_set() == {(F(s), F(t)) for s in (1, -1) for t in (1, -1)}
    assert all(len(active) == 2 for active in vs.active_sets)


@pytest.mark.parametrize("make", [square, diamond, triangle, cube])
def test_dd_and_brute_force_agree(make):
    p = make()
    assert enumerate_vertices_dd(p).vertices == enumerate_vertices(p).vertices


def test_brute_force_with_workers():
    assert len(enumerate_vertices(cube(), workers=2)) == 8


def test_unknown_method():
    with pytest.raises(ValueError):
        vertices_of(square(), method="simplex")


def test_unbounded():
    quadrant = HPolytope.from_inequalities([((1, 0), 0), ((0, 1), 0)])
    assert recession_direction(quadrant) is not None
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices_dd(quadrant)
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(quadrant)


def test_empty():
    p = HPolytope.from_inequalities([((1,), 1), ((-1,), 0)])
    with pytest.raises(EmptyPolytopeError):
        enumerate_vertices(p)


def test_vertex_and_adjacency_tests():
    p = square()
    assert is_vertex(p, (1, 1))
    assert not is_vertex(p, (1, 0))
    assert not is_vertex(p, (2, 2))
    assert contains(p, (F(1, 2), F(-1, 3)))
    assert are_adjacent(p, (1, 1), (1, -1))
    assert not are_adjacent(p, (1, 1), (-1, -1))
    assert not are_adjacent(p, (1, 1), (1, 1))


def test_cube_graph():
    g = build_graph(cube())
    assert g.node_count == 8
    assert g.edge_count == 12
    assert g.degree_histogram() == {3: 8}
    assert len(g.neighbors((1, 1, 1))) == 3


def test_facets():
    p = cube()
    assert len(facets(p, enumerate_vertices_dd(p))) == 6


def test_combinatorial_isomorphism():
    assert combinatorially_isomorphic(square(), diamond())
    assert not combinatorially_isomorphic(square(), triangle())


def test_sign_flip_equivalence():
    assert sign_flip_equivalent(square(), square(), {0})
    assert sign_flip_equivalent(cube(), cube().permuted_rows([1, 0, 3, 2, 5, 4]), {0, 2})
    assert sign_flip_equivalent(triangle(), triangle(), set())
    assert not sign_flip_equivalent(triangle(), triangle(), {0})
    mirrored = enumerate_vertices_dd(negate_columns(triangle(), {0})).as_set()
    assert mirrored == {(F(0), F(0)), (F(-1), F(0)), (F(0), F(1))}
    assert combinatorially_isomorphic(triangle(), negate_columns(triangle(), {1}), columns={1})


def test_row_order_and_scaling_do_not_change_vertices():
    p = cube()
    shuffled = p.permuted_rows([5, 3, 1, 0, 2, 4]).scaled_rows([F(k + 1, 2) for k in range(6)])
    assert enumerate_vertices_dd(shuffled).vertices == enumerate_vertices_dd(p).vertices
    with pytest.raises(ValueError):
        p.scaled_rows([0] * 6)


def test_convex_independent():
    corners = [(F(s), F(t)) for s in (1, -1) for t in (1, -1)]
    assert convex_independent(corners)
    assert not convex_independent(corners + [(F(0), F(0))])
