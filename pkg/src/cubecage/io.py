"""JSON and DOT formats for complexes, defining graphs and actions."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .graph import SimplicialGraph, sort_key
from .median import CubeComplex

PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta",
           "cyan4", "gold3", "gray40")


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None


def _vertex_list(data, what: str) -> list:
    if not isinstance(data, dict) or not isinstance(data.get("vertices"), list):
        raise InputError(f"{what} JSON needs a 'vertices' list")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise InputError(f"{what} JSON 'edges' must be a list")
    for v in data["vertices"]:
        if not isinstance(v, (int, str)) or isinstance(v, bool):
            raise InputError(f"vertex id {v!r} must be an integer or a string")
    return data["vertices"]


def complex_from_data(data) -> CubeComplex:
    vertices = _vertex_list(data, "complex")
    try:
        g = SimplicialGraph.from_edges(vertices, [tuple(e) for e in data.get("edges", [])])
    except TypeError:
        raise InputError("edges must be pairs of vertex ids") from None
    return CubeComplex(g, data.get("frontier", []))


def load_complex(path) -> CubeComplex:
    return complex_from_data(read_json(path))


def complex_to_data(c: CubeComplex) -> dict:
    return {
        "vertices": list(c.labels),
        "edges": [[c.label(a), c.label(b)] for a, b in c.edges],
        "frontier": [c.label(v) for v in sorted(c.frontier)],
    }


def graph_from_data(data) -> SimplicialGraph:
    vertices = _vertex_list(data, "defining graph")
    try:
        return SimplicialGraph.from_edges(vertices, [tuple(e) for e in data.get("edges", [])])
    except TypeError:
        raise InputError("edges must be pairs of vertex ids") from None


def load_graph(path) -> SimplicialGraph:
    return graph_from_data(read_json(path))


def graph_to_data(g: SimplicialGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}


def load_action_data(path) -> list[list]:
    data = read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
        raise InputError("action JSON needs a 'generators' list")
    return data["generators"]


def to_dot(c: CubeComplex, highlight: int | None = None) -> str:
    """DOT text for the skeleton.  Edges are coloured by class; with ``highlight``
    only that class is coloured and drawn bold."""
    lines = ["graph complex {", "  node [shape=circle];"]
    for v in range(c.n):
        attrs = ' style=filled fillcolor="lightgray"' if v in c.frontier else ""
        lines.append(f'  "{c.label(v)}" [label="{c.label(v)}"{attrs}];')
    for a, b in c.edges:
        k = c.class_of(a, b)
        if highlight is None:
            attr = f'color="{PALETTE[k % len(PALETTE)]}" label="{k}"'
        elif k == highlight:
            attr = 'color="red" penwidth=3'
        else:
            attr = 'color="gray60"'
        lines.append(f'  "{c.label(a)}" -- "{c.label(b)}" [{attr}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def sorted_ids(ids) -> list:
    return sorted(ids, key=sort_key)
