import random
from fractions import Fraction

import pytest

from merminpoly.errors import NonsignalingViolationError
from merminpoly.fine import (
    CHSH_ASSIGNMENTS,
    ChshDistribution,
    DiamondBoundary,
    boundary_of,
    chsh_probability_rows,
    chsh_values,
    deterministic_chsh,
    diamond_interval,
    extend_deterministic,
    extend_via_diamond,
    fine_check,
    first_violated_chsh,
    fm_chsh_inequalities,
    fm_chsh_system,
    is_noncontextual,
    pr_box,
    random_chsh,
    remix,
    restrict_to_chsh,
    run_fine_samples,
    uniform_chsh,
)
from merminpoly.mermin import expectations_from_dist, mermin_member
from merminpoly.scenario import BetaAssignment

F = Fraction


def test_pr_box():
    box = pr_box(0)
    assert box.is_valid()
    assert chsh_values(box) == (F(1), F(1), F(1), F(3))
    assert first_violated_chsh(box) == 3
    report = fine_check(box)
    assert not report.noncontextual
    assert report.agree
    assert report.extension is None and report.diamond_extension is None
    assert report.notes == ["violated CHSH inequality 3"]


@pytest.mark.parametrize("variant", range(8))
def test_pr_box_variants_are_contextual(variant):
    report = fine_check(pr_box(variant))
    assert not report.noncontextual
    assert not report.interval.nonempty


def test_pr_box_variant_range():
    with pytest.raises(ValueError):
        pr_box(8)


@pytest.mark.parametrize("index", range(16))
def test_deterministic_points_are_noncontextual(index):
    s = CHSH_ASSIGNMENTS[index]
    report = fine_check(deterministic_chsh(s))
    assert report.noncontextual
    assert report.weights == {index: F(1)}
    assert restrict_to_chsh(extend_deterministic(s)) == deterministic_chsh(s)


def test_uniform():
    report = fine_check(uniform_chsh())
    assert report.noncontextual
    assert chsh_values(uniform_chsh()) == (F(1),) * 4
    assert remix(report.weights) == uniform_chsh()
    assert report.torus_decomposition is not None


def test_mixture_threshold():
    # equal parts PR box and uniform sit on the CHSH boundary
    boundary = pr_box(0).mix(uniform_chsh(), F(1, 2))
    assert max(chsh_values(boundary)) == 2
    assert fine_check(boundary).noncontextual
    beyond = pr_box(0).mix(uniform_chsh(), F(3, 5))
    assert not fine_check(beyond).noncontextual


def test_diamond_extension_lies_in_mp0():
    p = random_chsh(random.Random(2))
    ext = extend_via_diamond(p)
    if ext is None:
        assert not diamond_interval(boundary_of(p)).nonempty
    else:
        assert restrict_to_chsh(ext) == p
        assert mermin_member(expectations_from_dist(ext), BetaAssignment.beta0())


def test_diamond_interval():
    interval = diamond_interval(DiamondBoundary(F(1), F(1), F(1), F(0)))
    assert (interval.lower, interval.upper) == (F(1), F(0))
    assert not interval.nonempty
    with pytest.raises(ValueError):
        DiamondBoundary(F(2), F(0), F(0), F(0))


def test_signaling_input_rejected():
    det = deterministic_chsh(CHSH_ASSIGNMENTS[0])
    tables = list(det.tables)
    tables[1] = (F(0), F(0), F(1), F(0))
    with pytest.raises(NonsignalingViolationError):
        fine_check(ChshDistribution(tuple(tables)))
    with pytest.raises(NonsignalingViolationError):
        ChshDistribution(((F(1, 2),) * 4,) * 4).check()


def test_table_shape_checked():
    with pytest.raises(ValueError):
        ChshDistribution(((F(1),),))


def test_is_noncontextual_reconstructs():
    p = random_chsh(random.Random(9))
    weights = is_noncontextual(p)
    if weights is not None:
        assert remix(weights) == p


def test_fourier_motzkin_recovers_chsh_rows():
    eliminated = set(fm_chsh_inequalities())
    box = {row for row in fm_chsh_system() if row[0][4] == 0}
    assert eliminated == set(chsh_probability_rows()) | box


def test_random_samples_agree():
    summary = run_fine_samples(100, seed=4)
    assert summary.passed
    assert summary.noncontextual + summary.contextual == 100
