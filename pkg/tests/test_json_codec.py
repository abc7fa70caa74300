import json
from fractions import Fraction

import pytest

from merminpoly import json_codec
from merminpoly.errors import InputFormatError
from merminpoly.fine import fine_check, pr_box, uniform_chsh
from merminpoly.lambda2 import born_distribution, membership_cross_check
from merminpoly.mermin import build_h_rep, dist_from_expectations
from merminpoly.scenario import BETA_PRESETS, BetaAssignment, IncidenceWeight
from merminpoly.symmetry import canonical_vertex, generate_G1, stabilizer

F = Fraction


@pytest.mark.parametrize("value", [0.5, "0.5", "1e2", True, None])
def test_rationals_refuse_non_exact_input(value):
    with pytest.raises(InputFormatError):
        json_codec.rational(value)


def test_rational_strings():
    assert json_codec.rational("-3/6") == F(-1, 2)
    assert json_codec.rational(2) == F(2)
    assert json_codec.encode_rational(F(5, 10)) == "1/2"


def test_decode_beta():
    assert json_codec.decode_beta("beta1") == BetaAssignment.beta1()
    assert json_codec.decode_beta('{"hor_0": 1}') == BETA_PRESETS["single"]
    with pytest.raises(InputFormatError):
        json_codec.decode_beta("{not json")
    with pytest.raises(InputFormatError):
        json_codec.decode_beta('{"hor_9": 1}')
    with pytest.raises(InputFormatError):
        json_codec.decode_beta("[1, 0]")


def test_decode_beta_from_file(tmp_path):
    path = tmp_path / "beta.json"
    path.write_text(json.dumps(BetaAssignment.beta1().as_mapping()))
    assert json_codec.decode_beta(str(path)) == BetaAssignment.beta1()


def test_point_and_distribution_codecs():
    v = canonical_vertex("V58")
    encoded = json_codec.encode_point(v)
    assert encoded["m_00"] == "1"
    assert json_codec.decode_point(encoded) == v
    with pytest.raises(InputFormatError):
        json_codec.decode_point({"m_00": "1"})

    p = dist_from_expectations(v, BetaAssignment.beta1())
    assert json_codec.decode_mermin(json_codec.encode_mermin(p)) == p


def test_chsh_codec():
    data = json_codec.encode_chsh(pr_box(0))
    assert set(data) == {"x0y0", "x0y1", "x1y0", "x1y1"}
    assert data["x1y1"] == {"00": "0", "01": "1/2", "10": "1/2", "11": "0"}
    assert json_codec.decode_chsh(data) == pr_box(0)
    data["x0y0"] = {"00": "1/2", "01": "0", "10": "0"}
    with pytest.raises(InputFormatError):
        json_codec.decode_chsh(data)
    with pytest.raises(InputFormatError):
        json_codec.decode_chsh({"x0y0": {"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25}})


def test_ns232_codec():
    d = born_distribution(3)
    data = json_codec.encode_ns232(d)
    assert len(data) == 9 and "ZY" in data
    assert json_codec.decode_ns232(data) == d


def test_weight_codec():
    w = IncidenceWeight.from_pairs([(0, 0), (4, 4)])
    assert json_codec.decode_weight(json_codec.encode_weight(w)) == w
    with pytest.raises(InputFormatError):
        json_codec.decode_weight([])


def test_polytope_codec():
    p = build_h_rep(BetaAssignment.beta0())
    data = json_codec.encode_polytope(p)
    assert data["dimension"] == 9
    assert data["rows"][0]["label"] == "hor_0:00"
    assert json_codec.decode_polytope(data) == p
    with pytest.raises(InputFormatError):
        json_codec.decode_polytope({"rows": [{"a": ["1"]}]})


def test_fine_report_encoding():
    report = json_codec.encode_fine_report(fine_check(pr_box(0)))
    assert report["noncontextual"] is False
    assert report["chsh_values"] == ["1", "1", "1", "3"]
    assert report["violated_inequality"] == 3
    assert report["weights"] is None

    uniform = json_codec.encode_fine_report(fine_check(uniform_chsh()))
    assert uniform["interval"]["nonempty"] is True
    assert sum(F(w) for w in uniform["weights"].values()) == 1
    json.dumps(uniform)


def test_cross_check_encoding():
    encoded = json_codec.encode_cross_check(membership_cross_check(born_distribution(0)))
    assert encoded["member"] is True
    assert encoded["negative_entry"] is None
    json.dumps(encoded)


def test_stabilizer_encoding():
    report = stabilizer(generate_G1(), canonical_vertex("V58"))
    encoded = json_codec.encode_stabilizer("V58", report)
    assert encoded["order"] == 16
    assert encoded["dihedral"]["n"] == 8
    assert len(encoded["dihedral"]["rotation"]["images"]) == 9
    json.dumps(encoded)
