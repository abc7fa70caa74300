from fractions import Fraction

import pytest

from merminpoly.mermin import build_h_rep, mermin_member, random_mp_point, vertex_type
from merminpoly.polytope import enumerate_vertices_dd
from merminpoly.scenario import BetaAssignment, Loop, chsh_generator_loops
from merminpoly.symmetry import (
    G0Element,
    G1Element,
    FiniteGroup,
    Pauli2,
    canonical_vertex,
    commute,
    commuting_triples,
    cycle_notation,
    derive_pauli_grid,
    first_failed_relation,
    g1_generators,
    generate_G0,
    generate_G1,
    intersect_stabilizers,
    loop_element,
    named_element,
    orbit,
    orbit_partition,
    orbit_stabilizer_holds,
    pauli_conjugations,
    phi_closed_form,
    projects_isomorphically_onto_aut,
    quotient_perms,
    search_phi,
    sign_kernel,
    stabilizer,
    triple_product_sign,
    verify_phi_isomorphism,
)

F = Fraction
BETA0 = BetaAssignment.beta0()
BETA1 = BetaAssignment.beta1()


@pytest.fixture(scope="module")
def g1():
    return generate_G1()


@pytest.fixture(scope="module")
def g0():
    return generate_G0()


@pytest.fixture(scope="module")
def mp1_vertices():
    return enumerate_vertices_dd(build_h_rep(BETA1)).vertices


def test_pauli_grid():
    grid = derive_pauli_grid()
    assert grid.labels == ("XX", "YZ", "ZY", "ZZ", "XY", "YX", "YY", "ZX", "XZ")
    assert [triple_product_sign(t) for t in grid.horizontal] == [1, 1, 1]
    assert [triple_product_sign(t) for t in grid.vertical] == [-1, -1, -1]
    assert len(commuting_triples()) == 6


def test_commutation():
    assert commute(Pauli2("XX"), Pauli2("ZZ"))
    assert not commute(Pauli2("XI"), Pauli2("ZI"))


def test_canonical_vertices(mp1_vertices):
    found = set(mp1_vertices)
    for name, kind in [("V57", "type-1"), ("V28", "type-1"), ("V58", "type-2"), ("V99", "type-2"), ("V22", "type-2")]:
        v = canonical_vertex(name)
        assert v in found
        assert vertex_type(v) == kind
    with pytest.raises(ValueError):
        canonical_vertex("V0")


def test_group_orders(g0, g1):
    assert g0.order == 1152
    assert g1.order == 1152
    assert g1.is_closed()
    assert g1.has_inverses()


def test_sympy_orders(g0, g1):
    assert g0.sympy_order() == 1152
    assert g1.sympy_order() == 1152


def test_g1_composition_order():
    gens = g1_generators()
    h, s = gens["h"], gens["s"]
    x = tuple(F(k + 1) for k in range(9))
    assert (h * s).act(x) == h.act(s.act(x))
    assert (h * h.inverse()) == G1Element.identity()


def test_g0_composition_order(g0):
    a, b = g0.generators[0], g0.generators[-1]
    x = tuple(F(k + 1) for k in range(9))
    assert (a * b).act(x) == a.act(b.act(x))
    assert (b * b.inverse()) == G0Element.identity()


def test_orbits_on_vertices(g0, g1, mp1_vertices):
    mp0 = enumerate_vertices_dd(build_h_rep(BETA0)).vertices
    assert [len(o) for o in orbit_partition(g0, mp0)] == [16]
    assert sorted(len(o) for o in orbit_partition(g1, mp1_vertices)) == [48, 72]
    assert orbit_stabilizer_holds(g1, mp1_vertices[:10])


def test_stabilizer_of_deterministic_point(g0):
    q = (F(1),) * 9
    report = stabilizer(g0, q)
    assert report.order == 72
    assert projects_isomorphically_onto_aut(report.group)


def test_stabilizer_of_q_splits_other_vertices_by_loop_length(g0):
    q = (F(1),) * 9
    mp0 = enumerate_vertices_dd(build_h_rep(BETA0)).vertices
    others = [v for v in mp0 if v != q]
    orbits = orbit_partition(stabilizer(g0, q).group, others)
    assert sorted(len(o) for o in orbits) == [6, 9]
    for orb in orbits:
        flipped = {sum(1 for x in v if x == -1) for v in orb}
        assert flipped == ({6} if len(orb) == 6 else {4})


def test_stabilizers_are_dihedral(g1):
    s57 = stabilizer(g1, canonical_vertex("V57"))
    assert s57.order == 24 and s57.dihedral.n == 12
    assert set(FiniteGroup.generate([named_element("Q"), named_element("R")], g1.identity)) == set(s57.group)

    s58 = stabilizer(g1, canonical_vertex("V58"))
    assert s58.order == 16 and s58.dihedral.n == 8
    assert set(FiniteGroup.generate([named_element("M"), named_element("SWAP")], g1.identity)) == set(s58.group)


def test_stabilizer_intersections(g1):
    p0 = canonical_vertex("V58")
    swap = named_element("SWAP")
    assert set(intersect_stabilizers(g1, p0, canonical_vertex("V22"))) == {g1.identity, swap}
    expected = {g1.identity, named_element("N").inverse() * swap}
    assert set(intersect_stabilizers(g1, p0, canonical_vertex("V57"))) == expected


def test_unknown_named_element():
    with pytest.raises(ValueError):
        named_element("P")


def test_sign_kernel(g1):
    assert set(sign_kernel(g1)) == set(pauli_conjugations())
    assert len(pauli_conjugations()) == 16
    assert len(quotient_perms(g1)) == 72


def test_generators_preserve_membership(g1, mp1_vertices):
    import random

    rng = random.Random(1)
    for _ in range(30):
        x = random_mp_point(mp1_vertices, rng)
        assert all(mermin_member(g.act(x), BETA1) for g in g1.generators)


def test_loop_flip_orbit():
    x0 = chsh_generator_loops()["x0"]
    q = (F(1),) * 9
    flipped = loop_element(x0).act(q)
    assert sum(1 for v in flipped if v == -1) == 4
    group = FiniteGroup.generate([loop_element(x0)], G0Element.identity())
    assert len(orbit(group, q)) == 2


def test_cycle_notation(g1):
    assert cycle_notation(G1Element.identity().context_perm()) == "()"
    assert cycle_notation(g1_generators()["w"].context_perm()) == "(46)"


def test_relations_hold_in_g1():
    assert first_failed_relation(g1_generators(), G1Element.identity()) is None


def test_phi_isomorphism():
    report = verify_phi_isomorphism(search_phi())
    assert report.worked_products == report.expected_products
    assert report.worked_products["(hs)^3"] == ("l0", "()")
    assert report.passed
    assert report.image_order == 1152
    assert set(report.aliases) >= {"l1a", "l2a", "l3a", "l4a", "l9a", "l1b", "l2b", "l3b", "l4b", "l5b", "l6b"}


def test_phi_closed_form_on_generators():
    phi = search_phi()
    for g in g1_generators().values():
        assert phi(g) == phi_closed_form(g)
    assert phi_closed_form(G1Element.identity()) == G0Element(frozenset(), G0Element.identity().perm)
    assert phi(named_element("SWAP")).flip == Loop(frozenset()).edges


def test_pauli_labels_validated():
    with pytest.raises(ValueError):
        Pauli2("XW")
    assert str(-Pauli2("XY")) == "-XY"
