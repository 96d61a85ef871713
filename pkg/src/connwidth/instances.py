"""JSON instance files.

Every parse error names the offending key (and index, for arrays) so the CLI
can report it verbatim.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import (ConnectivitySystem, CutRank, GraphCut, GroundSet, InputError,
                   Table, WeightedGraphCut)


class ParseError(InputError):
    pass


def _require(obj: dict, key: str, typ, where: str = ""):
    if key not in obj:
        raise ParseError(f"{where}missing key {key!r}")
    val = obj[key]
    if not isinstance(val, typ):
        raise ParseError(f"{where}key {key!r}: expected {getattr(typ, '__name__', typ)}")
    return val


def _nat(val, where: str) -> int:
    if isinstance(val, bool) or not isinstance(val, int) or val < 0:
        raise ParseError(f"{where}: expected a natural number, got {val!r}")
    return val


def _names(val, where: str) -> tuple[str, ...]:
    if not isinstance(val, list):
        raise ParseError(f"{where}: expected a list of names")
    for i, x in enumerate(val):
        if not isinstance(x, (str, int)) or isinstance(x, bool):
            raise ParseError(f"{where}[{i}]: expected a name, got {x!r}")
    return tuple(str(x) for x in val)


def _edges(obj: dict, vertices: tuple[str, ...]) -> tuple[tuple[str, str], ...]:
    raw = _require(obj, "edges", list)
    vs = set(vertices)
    out = []
    for i, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"key 'edges' index {i}: expected a [u, v] pair")
        u, v = (str(x) for x in e)
        for x in (u, v):
            if x not in vs:
                raise ParseError(f"key 'edges' index {i}: unknown vertex {x!r}")
        out.append((u, v))
    return tuple(out)


def system_from_json(obj) -> ConnectivitySystem:
    if not isinstance(obj, dict):
        raise ParseError("instance: expected a JSON object")
    kind = _require(obj, "type", str)
    if kind in ("graph-cut", "weighted-graph-cut"):
        vertices = _names(_require(obj, "vertices", list), "key 'vertices'")
        if len(set(vertices)) != len(vertices):
            raise ParseError("key 'vertices': duplicate vertex names")
        edges = _edges(obj, vertices)
        if kind == "graph-cut":
            labels = None
            if "labels" in obj:
                labels = _names(obj["labels"], "key 'labels'")
                if len(labels) != len(edges):
                    raise ParseError("key 'labels': expected one label per edge")
            spec = GraphCut(vertices, edges, labels)
        else:
            weights = _require(obj, "weights", list)
            if len(weights) != len(edges):
                raise ParseError("key 'weights': expected one weight per edge")
            ws = tuple(_nat(w, f"key 'weights' index {i}") for i, w in enumerate(weights))
            spec = WeightedGraphCut(vertices, edges, ws)
    elif kind == "cut-rank":
        adj = _require(obj, "adjacency", list)
        n = len(adj)
        rows = []
        for i, row in enumerate(adj):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"key 'adjacency' index {i}: expected a row of length {n}")
            for j, x in enumerate(row):
                if x not in (0, 1) or isinstance(x, bool):
                    raise ParseError(f"key 'adjacency' index [{i}][{j}]: expected 0 or 1")
            rows.append(tuple(row))
        for i in range(n):
            if rows[i][i]:
                raise ParseError(f"key 'adjacency' index [{i}][{i}]: diagonal must be 0")
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ParseError(f"key 'adjacency' index [{i}][{j}]: matrix not symmetric")
        labels = _names(obj["labels"], "key 'labels'") if "labels" in obj else None
        if labels is not None and len(labels) != n:
            raise ParseError("key 'labels': expected one label per row")
        spec = CutRank(tuple(rows), labels)
    elif kind == "table":
        elements = _names(_require(obj, "elements", list), "key 'elements'")
        ground = GroundSet(elements)
        entries = []
        for i, item in enumerate(_require(obj, "values", list)):
            where = f"key 'values' index {i}"
            if not isinstance(item, dict):
                raise ParseError(f"{where}: expected an object")
            names = _names(_require(item, "set", list, where + ": "), where + " key 'set'")
            try:
                mask = ground.mask(names)
            except InputError as exc:
                raise ParseError(f"{where}: {exc}") from None
            if len(set(names)) != len(names):
                raise ParseError(f"{where}: repeated element in 'set'")
            entries.append((mask, _nat(item.get("f"), f"{where} key 'f'")))
        spec = Table.from_entries(elements, entries)
    else:
        raise ParseError(f"key 'type': unknown instance type {kind!r}")
    name = obj.get("name", "")
    seed = obj.get("seed")
    return ConnectivitySystem(spec, name=str(name), seed=seed)


def load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    return parse_json_text(text, str(path))


def parse_json_text(text: str, where: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None


def load_system(path) -> ConnectivitySystem:
    system = system_from_json(load_json(path))
    if not system.name:
        system.name = Path(path).stem
    return system


def dumps(obj) -> str:
    """Stable JSON text: fixed key order, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
