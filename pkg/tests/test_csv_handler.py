from fractions import Fraction

import pytest

from merminpoly.csv_handler import graph_to_dot, read_vertex_csv, vertex_csv_text, write_dot, write_vertex_csv
from merminpoly.errors import InputFormatError
from merminpoly.polytope import HPolytope, build_graph
from merminpoly.scenario import MEASUREMENT_LABELS

F = Fraction


def test_vertex_csv(tmp_path):
    vertices = [(F(1), F(-1, 2)), (F(0), F(1))]
    path = write_vertex_csv(str(tmp_path / "out" / "v.csv"), vertices, ["a", "b"], ["p", "q"])
    columns, read, types = read_vertex_csv(path)
    assert columns == ["p", "q"]
    assert read == vertices
    assert types == ["a", "b"]


def test_vertex_csv_text():
    text = vertex_csv_text([(F(1, 3),) * 9], ["type-1"], MEASUREMENT_LABELS)
    header, row = text.splitlines()
    assert header.startswith("index,type,m_00")
    assert row.startswith("0,type-1,1/3")
    with pytest.raises(ValueError):
        vertex_csv_text([(F(1),)], [], None)


def test_read_rejects_bad_files(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(InputFormatError):
        read_vertex_csv(str(path))
    path.write_text("index,type,x0\n0,t,0.5\n")
    with pytest.raises(InputFormatError):
        read_vertex_csv(str(path))
    with pytest.raises(InputFormatError):
        read_vertex_csv(str(tmp_path / "missing.csv"))


def test_dot_output(tmp_path):
    square = HPolytope.from_inequalities([((1, 0), -1), ((-1, 0), -1), ((0, 1), -1), ((0, -1), -1)])
    graph = build_graph(square)
    text = graph_to_dot(graph, "square")
    assert text.startswith('graph "square" {')
    assert text.count(" -- ") == 4
    path = write_dot(str(tmp_path / "g.dot"), graph)
    with open(path, encoding="utf-8") as f:
        assert f.read().count(" -- ") == 4
