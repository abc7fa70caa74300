import json

import pytest

from merminpoly.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_SEMANTIC, create_cli_parser, main


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run_json(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_parser_requires_a_subcommand():
    with pytest.raises(SystemExit):
        create_cli_parser().parse_args([])


def test_scenario(capsys):
    code, payload = run_json(capsys, "scenario", "--beta", "beta1")
    assert code == EXIT_OK
    assert payload["class"] == 1
    assert len(payload["loops"]) == 15
    assert payload["measurements"]["m_00"] == "XX"


def test_vertices_writes_csv_and_sidecar(capsys, workspace):
    out = workspace / "reports" / "mp0.csv"
    code = main(["vertices", "--beta", "beta0", "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_text().startswith("index,type,m_00")
    sidecar = json.loads((workspace / "reports" / "mp0.json").read_text())
    assert sidecar["enumerated"] == 16
    assert "16 vertices enumerated" in capsys.readouterr().out


def test_vertices_csv_on_stdout(capsys):
    assert main(["vertices", "--beta", "beta0", "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 17


def test_unavailable_format(capsys):
    assert main(["vertices", "--beta", "beta0", "--format", "dot"]) == EXIT_INPUT
    assert "not available" in capsys.readouterr().err


def test_graph_dot(capsys):
    assert main(["graph", "--beta", "beta0", "--format", "dot"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("graph ")
    assert out.count(" -- ") == 120


def test_orbits(capsys):
    code, payload = run_json(capsys, "orbits", "--beta", "beta0", "--automorphism-limit", "10")
    assert code == EXIT_OK
    assert payload["group_order"] == 1152
    assert [o["size"] for o in payload["orbits"]] == [16]
    assert payload["automorphism_search_truncated"] is True


def test_stabilizer(capsys):
    code, payload = run_json(capsys, "stabilizer", "--vertex", "V57")
    assert code == EXIT_OK
    assert payload["order"] == 24
    assert payload["dihedral"]["n"] == 12
    assert [o["size"] for o in payload["neighbour_orbits"]] == [12]


def test_fine_pr_box(capsys):
    code, payload = run_json(capsys, "fine", "--input", "pr_box")
    assert code == EXIT_OK
    assert payload["noncontextual"] is False
    assert payload["violated_inequality"] == 3


def test_fine_from_file(capsys, workspace):
    quarter = {"00": "1/4", "01": "1/4", "10": "1/4", "11": "1/4"}
    path = workspace / "uniform.json"
    path.write_text(json.dumps({name: quarter for name in ("x0y0", "x0y1", "x1y0", "x1y1")}))
    code, payload = run_json(capsys, "fine", "--input", str(path))
    assert code == EXIT_OK
    assert payload["noncontextual"] is True


def test_fine_rejects_floats(capsys, workspace):
    quarter = {"00": 0.25, "01": 0.25, "10": 0.25, "11": 0.25}
    path = workspace / "floats.json"
    path.write_text(json.dumps({name: quarter for name in ("x0y0", "x0y1", "x1y0", "x1y1")}))
    assert main(["fine", "--input", str(path)]) == EXIT_INPUT


def test_fine_rejects_signaling(workspace):
    tables = {name: {"00": "1", "01": "0", "10": "0", "11": "0"} for name in ("x0y0", "x1y0", "x1y1")}
    tables["x0y1"] = {"00": "0", "01": "0", "10": "1", "11": "0"}
    path = workspace / "signaling.json"
    path.write_text(json.dumps(tables))
    assert main(["fine", "--input", str(path)]) == EXIT_SEMANTIC


def test_fine_bad_variant():
    assert main(["fine", "--input", "pr_box:9"]) == EXIT_INPUT


@pytest.mark.parametrize("source,status", [("pr_box", "⚠ contextual"), ("uniform", "✅ noncontextual")])
def test_fine_status_line_follows_verdict(capsys, source, status):
    assert main(["fine", "--input", source]) == EXIT_OK
    out = capsys.readouterr().out
    assert status in out
    assert ("✅" in out) == source.startswith("uniform")


def test_lambda2(capsys):
    code, payload = run_json(capsys, "lambda2", "--input", "stabilizer:0")
    assert code == EXIT_OK
    assert payload["member"] is True
    assert main(["lambda2"]) == EXIT_INPUT


def test_bad_beta():
    assert main(["vertices", "--beta", "{broken"]) == EXIT_INPUT


def test_orbits_refuse_other_betas():
    with pytest.raises(SystemExit):
        main(["orbits", "--beta", "single"])


def test_bad_config(workspace):
    (workspace / "mermin_config.json").write_text(json.dumps({"enumeration_method": "lrs"}))
    assert main(["scenario"]) == EXIT_INPUT


def test_verify_all_subset(capsys, workspace):
    code = main(["verify-all", "--only", "structure", "--only", "ranks"])
    assert code == EXIT_OK
    report = json.loads((workspace / "working_dir" / "verify_all.json").read_text())
    assert report["failed"] == 0
    assert {c["group"] for c in report["claims"]} == {"structure", "ranks"}
    assert all("seconds" not in c for c in report["claims"])
    assert list((workspace / "working_dir" / "run_logs").glob("run_*.log"))


def test_verify_all_timings(workspace):
    out = workspace / "ranks.json"
    assert main(["verify-all", "--only", "ranks", "--timings", "--out", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert all("seconds" in c for c in report["claims"])


def test_verify_all_reports_failures(monkeypatch, capsys):
    from merminpoly.core import MerminCore, Report

    monkeypatch.setattr(MerminCore, "check_ranks", lambda self: [Report("forced", 1, 2, group="ranks")])
    assert main(["verify-all", "--only", "ranks"]) == EXIT_FAILED
    assert "forced" in capsys.readouterr().err
