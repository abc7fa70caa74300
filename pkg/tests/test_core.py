import json
from fractions import Fraction

import pytest

from merminpoly.core import CLAIM_GROUPS, MerminCore, Report, create_core, jsonable
from merminpoly.errors import VerificationError
from merminpoly.scenario import BetaAssignment

F = Fraction


@pytest.fixture(scope="module")
def core():
    return MerminCore({
        "samples": 20,
        "lambda2_samples": 10,
        "mp0_samples": 10,
        "weight_samples": 4,
        "invariance_samples": 10,
        "membership_samples": 50,
    })


def test_jsonable():
    assert jsonable({1: (F(1, 2), F(2))}) == {"1": ["1/2", "2"]}
    assert jsonable({3, 1, 2}) == [1, 2, 3]
    assert jsonable(None) is None
    assert jsonable(True) is True


def test_report_comparison():
    assert Report("degrees", {12: 48}, {12: 48}).passed
    assert Report("value", F(3), F(6, 2)).passed
    assert not Report("value", 3, F(3)).passed
    data = Report("x", 1, 1, seconds=0.25, group="g").as_dict(timings=True)
    assert data["seconds"] == "0.250"
    assert "seconds" not in Report("x", 1, 1).as_dict()


def test_check_turns_errors_into_failures(core):
    def broken():
        raise VerificationError("boom")

    report = core._check("broken claim", 1, broken)
    assert not report.passed
    assert report.computed == "error: boom"


def test_unknown_group(core):
    with pytest.raises(ValueError):
        core.run_group("everything")


def test_caches(core):
    beta = BetaAssignment.beta0()
    assert core.vertices(beta) is core.vertices(beta)
    assert core.vertex_types(beta) == ["deterministic"] * 16
    assert core.graph(beta).graph.nodes[0]["type"] == "deterministic"
    assert core.group_for(BetaAssignment.beta1()).order == 1152


def test_seeded_rng(core):
    assert core.rng("a").random() == core.rng("a").random()
    assert core.rng("a").random() != core.rng("b").random()


@pytest.mark.parametrize("group", ["structure", "ranks", "vertices", "fine", "phi", "orbits", "nonneighbor", "groups", "weights"])
def test_claim_group_passes(core, group):
    reports = core.run_group(group)
    assert reports
    failed = [(r.claim, r.expected, r.computed) for r in reports if not r.passed]
    assert failed == []
    assert all(r.group == group for r in reports)


def test_payload(core):
    reports = core.run_all(["structure"])
    payload = core.payload(reports)
    assert payload["failed"] == 0
    assert payload["passed"] == len(payload["claims"])
    assert payload["seed"] == core.seed
    json.dumps(payload)


def test_create_core_reads_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 11, "samples": 5}))
    core = create_core(str(path), {"workers": 2, "seed": None})
    assert core.seed == 11
    assert core.workers == 2
    assert core.cfg["samples"] == 5


@pytest.mark.slow
def test_every_claim_passes():
    core = MerminCore()
    reports = core.run_all()
    assert {r.group for r in reports} == set(CLAIM_GROUPS)
    assert [r.claim for r in reports if not r.passed] == []


def test_stabilizer_of_q_claim(core):
    claims = {r.claim: r for r in core.run_group("groups")}
    report = claims["Stab(q) orbits on the other vertices"]
    assert report.expected == [6, 9]
    assert report.passed
