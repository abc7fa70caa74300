import random
from fractions import Fraction

import pytest

from merminpoly.errors import InvalidDescriptorError, InvalidSignedLoopError, NonsignalingViolationError
from merminpoly.mermin import (
    MerminDistribution,
    VertexDescriptor,
    all_descriptors,
    build_h_rep,
    build_tilde_h_rep,
    decompose_mp0,
    dist_from_expectations,
    dist_from_marginals,
    edge_path,
    edge_rank,
    expectations_from_dist,
    incidence_weight_invariance,
    mermin_member,
    mp_isomorphic,
    random_mp_point,
    signed_loop_between,
    SignedLoop,
    tilde_rows_match_beta,
    two_edge_rule_holds,
    vertex_from_descriptor,
    verify_graph_structure,
    verify_vertex_classification,
    zero_case_table,
    zero_pattern,
    zero_pattern_rank_cases,
)
from merminpoly.polytope import build_graph, enumerate_vertices_dd, sign_flip_equivalent
from merminpoly.scenario import (
    BETA_PRESETS,
    CANONICAL_CLASS1_WEIGHT,
    BetaAssignment,
    CncSet,
    IncidenceWeight,
    OutcomeAssignment,
    chsh_generator_loops,
    flips_between,
    random_incidence_weight,
)
from merminpoly.symmetry import canonical_vertex

F = Fraction
BETA0 = BetaAssignment.beta0()
BETA1 = BetaAssignment.beta1()
ORIGIN = (F(0),) * 9
ONES = (F(1),) * 9


@pytest.fixture(scope="module")
def mp1():
    return build_h_rep(BETA1)


@pytest.fixture(scope="module")
def mp1_graph(mp1):
    return build_graph(mp1)


@pytest.fixture(scope="module")
def mp0_graph():
    return build_graph(build_h_rep(BETA0))


def test_h_rep_shape(mp1):
    assert mp1.nrows == 24
    assert mp1.dimension == 9
    assert mp1.row_labels[0] == "hor_0:00"
    assert all(b == -1 for b in mp1.b)


def test_classification_mp0():
    report = verify_vertex_classification(BETA0)
    assert report.passed
    assert report.type_counts == {"deterministic": 16}


def test_classification_mp1(mp1_graph):
    report = verify_vertex_classification(BETA1, mp1_graph.vertices)
    assert report.passed
    assert report.type_counts == {"type-1": 48, "type-2": 72}


@pytest.mark.parametrize("name", ["single", "mixed"])
def test_classification_other_class1_betas(name):
    report = verify_vertex_classification(BETA_PRESETS[name])
    assert report.passed
    assert report.enumerated == 120


def test_descriptor_validation():
    det = all_descriptors(BETA0)[0]
    with pytest.raises(InvalidDescriptorError):
        vertex_from_descriptor(det, BETA1)
    cnc = all_descriptors(BETA1)[0]
    with pytest.raises(InvalidDescriptorError):
        vertex_from_descriptor(cnc, BETA0)
    wrong_carrier = VertexDescriptor.cnc(cnc.omega, OutcomeAssignment.from_mapping({0: 0}))
    with pytest.raises(InvalidDescriptorError):
        vertex_from_descriptor(wrong_carrier, BETA1)
    not_maximal = VertexDescriptor.cnc(CncSet(frozenset({0, 1, 2})), OutcomeAssignment.from_mapping({0: 0, 1: 0, 2: 0}))
    with pytest.raises(InvalidDescriptorError):
        vertex_from_descriptor(not_maximal, BETA1)


def test_distribution_bridge():
    v = canonical_vertex("V58")
    p = dist_from_expectations(v, BETA1)
    assert p.proper
    assert all(sum(t) == 1 for t in p.tables)
    assert expectations_from_dist(p) == v


def test_signaling_tables_rejected():
    p = dist_from_expectations(ORIGIN, BETA1)
    bad = MerminDistribution(BETA1, ((F(1), F(0), F(0), F(0)),) + p.tables[1:])
    with pytest.raises(NonsignalingViolationError):
        expectations_from_dist(bad)
    unnormalized = MerminDistribution(BETA1, ((F(1, 2), F(0), F(0), F(0)),) + p.tables[1:])
    with pytest.raises(NonsignalingViolationError):
        expectations_from_dist(unnormalized)


def test_dist_from_marginals_matches_expectations():
    table = dist_from_marginals([F(1, 2), F(1, 2), F(1, 2)], 1)
    assert table == dist_from_expectations(ORIGIN, BETA1).tables[0]


def test_membership():
    assert mermin_member(ORIGIN, BETA1)
    assert mermin_member(ONES, BETA0)
    assert not mermin_member(ONES, BETA1)


def test_signed_loops_between_canonical_vertices():
    p0 = canonical_vertex("V58")
    assert len(signed_loop_between(p0, canonical_vertex("V28")).loop.edges) == 6
    assert signed_loop_between(p0, canonical_vertex("V57")).loop.kind == "a"
    assert signed_loop_between(p0, canonical_vertex("V99")).loop.kind == "b"
    assert signed_loop_between(p0, canonical_vertex("V22")).loop.kind == "a"


def test_signed_loop_rejects_non_loops():
    with pytest.raises(InvalidSignedLoopError):
        SignedLoop.from_mapping({0: 1, 1: -1})
    with pytest.raises(InvalidSignedLoopError):
        signed_loop_between(ORIGIN, (F(2),) + ORIGIN[1:])


def test_edge_path(mp1):
    p0, v57, v28 = canonical_vertex("V58"), canonical_vertex("V57"), canonical_vertex("V28")
    path = edge_path(mp1, p0, signed_loop_between(p0, v57))
    assert path.is_edge
    assert path.at(0) == p0
    assert path.at(F(1, 2)) == v57
    with pytest.raises(ValueError):
        path.at(1)
    assert not edge_path(mp1, p0, signed_loop_between(p0, v28)).is_edge


def test_zero_patterns():
    assert len(zero_case_table()) == 7
    pattern = zero_pattern(dist_from_expectations(canonical_vertex("V58"), BETA1))
    assert sum(pattern.zeros_per_context) > 0
    assert set(pattern.deterministic_edges) == {m for m, v in enumerate(canonical_vertex("V58")) if v != 0}


@pytest.mark.parametrize("case", zero_pattern_rank_cases(), ids=lambda c: c.name)
def test_zero_pattern_rank_cases(case):
    assert case.computed == case.expected


def test_edge_rank_mp0():
    p = build_h_rep(BETA0)
    flips = chsh_generator_loops()["x0"].edges
    flipped = tuple(-v if m in flips else v for m, v in enumerate(ONES))
    assert edge_rank(p, ONES, flipped) == 8


def test_graph_structure(mp0_graph, mp1_graph):
    mp0 = verify_graph_structure(BETA0, mp0_graph)
    assert (mp0.node_count, mp0.edge_count) == (16, 120)
    assert mp0.degree_histogram == {15: 16}

    mp1 = verify_graph_structure(BETA1, mp1_graph)
    assert mp1.edge_count == 1152
    assert mp1.degree_histogram == {12: 48, 24: 72}
    assert mp1.degrees_by_type == {"type-1": [12], "type-2": [24]}
    assert mp1.type1_independent
    assert two_edge_rule_holds(mp1_graph.vertices.vertices, BETA1)


def test_decompose_mp0():
    vertices = enumerate_vertices_dd(build_h_rep(BETA0)).vertices
    point = random_mp_point(vertices, random.Random(3))
    weights = decompose_mp0(point)
    assert weights is not None
    assert sum(weights.values()) == 1
    assert all(w > 0 for w in weights.values())
    rebuilt = tuple(sum((w * v[m] for v, w in weights.items()), F(0)) for m in range(9))
    assert rebuilt == point
    assert decompose_mp0(canonical_vertex("V58")) is None


def test_tilde_rows():
    rng = random.Random(11)
    assert all(tilde_rows_match_beta(random_incidence_weight(rng)) for _ in range(20))
    assert build_tilde_h_rep(IncidenceWeight.zero()).nrows == 24


def test_weight_invariance():
    rng = random.Random(5)
    weights = [IncidenceWeight.zero(), CANONICAL_CLASS1_WEIGHT, random_incidence_weight(rng)]
    for record in incidence_weight_invariance(weights):
        assert record.isomorphic_to_class
        assert not record.isomorphic_to_other
        assert record.canonical in (IncidenceWeight.zero(), CANONICAL_CLASS1_WEIGHT)
        reference = build_h_rep(BETA1 if record.weight_class else BETA0)
        assert sign_flip_equivalent(build_tilde_h_rep(record.weight), reference, record.flips)


def test_isomorphism_between_betas():
    assert mp_isomorphic(BETA1, BETA_PRESETS["mixed"])
    assert mp_isomorphic(BETA_PRESETS["single"], BETA1)
    assert not mp_isomorphic(BETA0, BETA1)


def test_measurement_negation_certificate():
    mixed = build_h_rep(BETA_PRESETS["mixed"])
    flips = flips_between(BETA1, BETA_PRESETS["mixed"])
    assert sign_flip_equivalent(build_h_rep(BETA1), mixed, flips)
    assert not sign_flip_equivalent(build_h_rep(BETA1), mixed, set())
    assert not sign_flip_equivalent(build_h_rep(BETA0), build_h_rep(BETA1), {0})


@pytest.mark.slow
def test_brute_force_matches_double_description(mp1_graph):
    from merminpoly.polytope import enumerate_vertices

    assert enumerate_vertices(build_h_rep(BETA1), workers=2).vertices == mp1_graph.vertices.vertices
