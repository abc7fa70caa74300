"""CSV and DOT file handling for vertex sets and polytope graphs"""
import csv
import io
import os
from typing import List, Optional, Sequence, Tuple

from .errors import InputFormatError
from .exactla import Vector, format_rational, parse_rational
from .polytope import PolytopeGraph


def vertex_header(dimension: int, columns: Optional[Sequence[str]] = None) -> List[str]:
    return ["index", "type"] + list(columns or [f"x{k}" for k in range(dimension)])


def vertex_csv_text(vertices: Sequence[Vector], types: Sequence[str],
                    columns: Optional[Sequence[str]] = None) -> str:
    """One row per vertex; coordinates as p/q strings."""
    if len(types) != len(vertices):
        raise ValueError("one type per vertex is required")
    dimension = len(vertices[0]) if vertices else len(columns or [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(vertex_header(dimension, columns))
    for k, (v, kind) in enumerate(zip(vertices, types)):
        writer.writerow([k, kind] + [format_rational(x) for x in v])
    return buffer.getvalue()


def write_vertex_csv(path: str, vertices: Sequence[Vector], types: Sequence[str],
                     columns: Optional[Sequence[str]] = None) -> str:
    text = vertex_csv_text(vertices, types, columns)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(text)
    return path


def read_vertex_csv(path: str) -> Tuple[List[str], List[Vector], List[str]]:
    """Return (coordinate columns, vertices, types)."""
    try:
        with open(path, "r", newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise InputFormatError(f"cannot read {path}: {e}") from None
    if not rows or rows[0][:2] != ["index", "type"]:
        raise InputFormatError(f"{path} is not a vertex CSV")
    columns = rows[0][2:]
    vertices, types = [], []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(columns) + 2:
            raise InputFormatError(f"{path}:{line} has {len(row)} fields")
        types.append(row[1])
        vertices.append(tuple(parse_rational(x) for x in row[2:]))
    return columns, vertices, types


def _dot_id(label: str) -> str:
    return '"' + label.replace('"', r'\"') + '"'


def graph_to_dot(graph: PolytopeGraph, name: str = "polytope") -> str:
    """Undirected DOT text; nodes carry their label and type attribute."""
    g = graph.graph
    lines = [f"graph {_dot_id(name)} {{"]
    for node in sorted(g.nodes):
        attrs = g.nodes[node]
        label = attrs.get("label", str(node))
        extra = f", type={_dot_id(attrs['type'])}" if "type" in attrs else ""
        lines.append(f"  {node} [label={_dot_id(label)}{extra}];")
    for u, v in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(path: str, graph: PolytopeGraph, name: str = "polytope") -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(graph_to_dot(graph, name))
    return path
