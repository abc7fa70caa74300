import random
from collections import Counter

import pytest

from merminpoly.errors import InputFormatError
from merminpoly.scenario import (
    BETA_PRESETS,
    CANONICAL_CLASS1_WEIGHT,
    CONTEXTS,
    SCENARIO,
    BetaAssignment,
    CncSet,
    IncidenceWeight,
    Loop,
    beta_of_weight,
    chsh_generator_loops,
    contexts_of,
    cycle_space,
    decomposition_aliases,
    enumerate_cnc_sets,
    enumerate_loops,
    flip_beta,
    flips_between,
    is_closed,
    k33_automorphisms,
    measurement_flips,
    normalize_incidence_weight,
    outcome_assignments,
    random_incidence_weight,
    respects_beta,
    shared_measurement,
)


def test_scenario_incidence():
    assert SCENARIO.check()
    assert len(SCENARIO.incidence_edges()) == 9
    assert contexts_of(5) == (1, 5)
    assert shared_measurement(2, 4) == 7
    assert shared_measurement(0, 1) is None


def test_beta_presets_and_classes():
    assert BETA_PRESETS["beta0"].cohomology_class == 0
    assert BETA_PRESETS["beta1"].cohomology_class == 1
    assert BETA_PRESETS["single"].cohomology_class == 1
    assert BETA_PRESETS["mixed"].cohomology_class == 1
    assert BetaAssignment.from_mapping({"ver_0": 1, "ver_1": 1, "ver_2": 1}) == BetaAssignment.beta1()


@pytest.mark.parametrize("bad", [(0, 0, 0), (0, 0, 0, 0, 0, 2)])
def test_beta_rejects_malformed(bad):
    with pytest.raises(InputFormatError):
        BetaAssignment(bad)


def test_beta_rejects_unknown_context():
    with pytest.raises(InputFormatError):
        BetaAssignment.from_mapping({"diag": 1})


def test_cycle_space():
    space = cycle_space()
    assert len(space) == 16
    assert space[0] == Loop(frozenset())
    loops = enumerate_loops()
    assert Counter(len(l.edges) for l in loops) == {4: 9, 6: 6}
    assert all((a ^ b) in space for a in loops for b in loops)


def test_chsh_generators_are_a_loops():
    gens = chsh_generator_loops()
    assert set(gens) == {"x0", "x1", "y0", "y1"}
    assert all(loop.kind == "a" for loop in gens.values())
    l1a = decomposition_aliases()["l1a"]
    assert l1a.kind == "a"
    assert len(l1a.edges) == 4


def test_closure():
    assert is_closed({0, 4, 8})
    assert not is_closed({0, 1})
    assert is_closed(set(range(9)))


def test_respects_beta():
    assert respects_beta({0: 1, 1: 1, 2: 0}, BetaAssignment.beta0())
    assert not respects_beta({0: 1, 1: 0, 2: 0}, BetaAssignment.beta0())
    assert respects_beta({0: 1, 3: 0}, BetaAssignment.beta1())


def test_cnc_sets_beta1():
    sets = enumerate_cnc_sets(BetaAssignment.beta1())
    assert Counter(s.kind for s in sets) == {"type-1": 6, "type-2": 9}
    for s in sets:
        assert len(outcome_assignments(s, BetaAssignment.beta1())) == 8
    assert {s.complement() for s in sets} == set(enumerate_loops())


def test_cnc_sets_beta0_is_global():
    sets = enumerate_cnc_sets(BetaAssignment.beta0())
    assert [s.kind for s in sets] == ["global"]
    assert len(outcome_assignments(sets[0], BetaAssignment.beta0())) == 16


def test_outcome_assignments_need_closure():
    with pytest.raises(ValueError):
        outcome_assignments(CncSet(frozenset({0, 1})), BetaAssignment.beta1())


def test_k33_automorphisms():
    autos = k33_automorphisms()
    assert len(autos) == 72
    for g in autos:
        assert sorted(g.edge_perm) == list(range(9))
        assert g * g.inverse() == type(g).identity()
        images = {frozenset(g.context_perm[c] for c in range(6) if m in CONTEXTS[c]) for m in range(9)}
        assert all(len(pair) == 2 for pair in images)
    assert sum(g.swaps_families() for g in autos) == 36


def test_incidence_weight_mapping():
    w = IncidenceWeight.from_mapping({"hor_0": {"m_00": 1}, "ver_2": {"m_12": 1}})
    assert w.get(0, 0) == 1 and w.get(5, 5) == 1
    assert beta_of_weight(w) == BetaAssignment.from_contexts(["hor_0", "ver_2"])
    with pytest.raises(InputFormatError):
        IncidenceWeight.from_mapping({"hor_0": {"m_11": 1}})


def test_normalization_reaches_canonical_forms():
    rng = random.Random(7)
    for _ in range(50):
        w = random_incidence_weight(rng)
        normal, moves = normalize_incidence_weight(w)
        expected = CANONICAL_CLASS1_WEIGHT if w.total_class else IncidenceWeight.zero()
        assert normal == expected
        assert all(sum(a != b for a, b in zip(before.values, move.after.values)) == 2
                   for before, move in zip([w] + [m.after for m in moves], moves))


def test_transfer_moves_negate_measurements():
    rng = random.Random(11)
    for _ in range(30):
        w = random_incidence_weight(rng)
        normal, moves = normalize_incidence_weight(w)
        assert flip_beta(beta_of_weight(w), measurement_flips(moves)) == beta_of_weight(normal)


def test_flips_between_betas():
    beta0, beta1 = BetaAssignment.beta0(), BetaAssignment.beta1()
    assert flips_between(beta0, beta0) == frozenset()
    assert flips_between(beta0, beta1) is None
    flips = flips_between(beta1, BETA_PRESETS["mixed"])
    assert flips is not None
    assert flip_beta(beta1, flips) == BETA_PRESETS["mixed"]
    assert flip_beta(beta0, {4}) == BetaAssignment.from_contexts(["hor_1", "ver_1"])
