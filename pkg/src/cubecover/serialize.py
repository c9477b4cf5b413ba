"""JSON file formats.

Every document is a UTF-8 JSON object with ``"format": 1`` and a ``"kind"``
discriminator: ``complex``, ``kneser``, ``coloring``, ``cover``, ``delta``
or ``chain``.  Cell ids are plain integers.  Writers are deterministic, so
the same object always produces the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .complex import CubeComplex, DeltaAssignment, validate_complex
from .cover import CoverMap
from .deltacat import DeltaCategory, PreDeltaCategory
from .errors import ParseError
from .kneser import KneserComplex, LabelSet, build_kneser
from .leighton import LColoring

FORMAT = 1
KINDS = ("complex", "kneser", "coloring", "cover", "delta", "chain")


def _ints(a) -> list:
    return np.asarray(a, dtype=np.int64).tolist()


# ---------------------------------------------------------------- to documents


def complex_doc(X: CubeComplex) -> dict:
    return {
        "format": FORMAT,
        "kind": "complex",
        "n_vertices": int(X.n_vertices),
        "edges": _ints(np.stack([X.src, X.dst, X.rev], axis=1)) if X.n_edges else [],
        "squares": _ints(X.squares),
        "cubes": [{"axes": _ints(A), "faces": _ints(F)} for A, F in zip(X.cubes, X.cube_faces)],
    }


def kneser_doc(L: KneserComplex) -> dict:
    elems = L.ground.elements
    label_type = "int" if all(isinstance(a, int) for a in elems) else "str"
    return {
        "format": FORMAT,
        "kind": "kneser",
        "ground": [str(a) for a in elems],
        "label_type": label_type,
        "n": L.n,
        "vertices": [[str(elems[i]) for i in s] for s in L.vertices],
        "edges": [list(e) for e in L.edges],
    }


def _assignment_doc(A: DeltaAssignment) -> dict:
    return {"L": kneser_doc(A.L), "end_label": _ints(A.end_label)}


def coloring_doc(col: LColoring) -> dict:
    X = col.complex
    und = X.undirected
    return {
        "format": FORMAT,
        "kind": "coloring",
        "complex": complex_doc(X),
        "L": kneser_doc(col.L),
        # one row per undirected 1-cube: [edge id, colour, colour's n-subset]
        "colors": [
            [int(e), int(col.colors[e]), [str(a) for a in col.L.subset(int(col.colors[e]))]]
            for e in und
        ],
        "q": None if col.q is None else _ints(col.q),
    }


def cover_doc(f: CoverMap) -> dict:
    return {
        "format": FORMAT,
        "kind": "cover",
        "degree": int(f.degree),
        "total": complex_doc(f.total),
        "base": complex_doc(f.base),
        "vertex_map": _ints(f.vertex_map),
        "edge_map": _ints(f.edge_map),
        "square_map": _ints(f.square_map),
        "cube_map": _ints(f.cube_map),
    }


def delta_doc(dc: DeltaCategory | PreDeltaCategory) -> dict:
    partial = isinstance(dc, PreDeltaCategory)
    doc = {
        "format": FORMAT,
        "kind": "delta",
        "partial": partial,
        "complex": complex_doc(dc.complex),
        "assignment": _assignment_doc(dc.assignment),
        "phi": _ints(dc.phi),
    }
    if not partial:
        doc["base_choices"] = [[int(h), list(map(int, p))] for h, p in sorted(dc.base_choices.items())]
    return doc


def chain_doc(paths: list[str]) -> dict:
    return {"format": FORMAT, "kind": "chain", "covers": list(paths)}


def to_doc(obj) -> dict:
    if isinstance(obj, CubeComplex):
        return complex_doc(obj)
    if isinstance(obj, KneserComplex):
        return kneser_doc(obj)
    if isinstance(obj, LColoring):
        return coloring_doc(obj)
    if isinstance(obj, CoverMap):
        return cover_doc(obj)
    if isinstance(obj, (DeltaCategory, PreDeltaCategory)):
        return delta_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """One top-level key per line, values compact."""
    doc = obj if isinstance(obj, dict) else to_doc(obj)
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in doc.items())
    return "{\n" + body + "\n}\n"


def write(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


# ---------------------------------------------------------------- from documents


class _Doc:
    """Wraps a parsed document so schema errors can point back into the text."""

    def __init__(self, data: dict, text: str | None):
        self.data = data
        self.text = text

    def where(self, key: str) -> tuple[int | None, int | None]:
        if self.text is None:
            return None, None
        pos = self.text.find(json.dumps(key))
        if pos < 0:
            return 1, 1
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, key: str, msg: str):
        line, col = self.where(key)
        raise ParseError(f"{key}: {msg}", line, col)

    def get(self, key: str, typ=None):
        if key not in self.data:
            raise ParseError(f"missing key {key!r}", *((1, 1) if self.text is not None else (None, None)))
        v = self.data[key]
        if typ is not None and not isinstance(v, typ):
            self.fail(key, f"expected {getattr(typ, '__name__', typ)}")
        return v

    def sub(self, key: str) -> "_Doc":
        return _Doc(self.get(key, dict), self.text)


def _int_array(d: _Doc, key: str, shape_tail: tuple[int, ...]) -> np.ndarray:
    raw = d.get(key, list)
    try:
        a = np.asarray(raw, dtype=np.int64)
    except (ValueError, TypeError):
        d.fail(key, "expected a rectangular integer table")
    if a.size == 0:
        return np.zeros((0,) + shape_tail, dtype=np.int64)
    if a.shape[1:] != shape_tail:
        d.fail(key, f"rows must have shape {shape_tail}, got {a.shape[1:]}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in np.asarray(raw, dtype=object).ravel()):
        d.fail(key, "entries must be integers")
    return a


def _check_kind(d: _Doc, kind: str) -> None:
    if d.get("format") != FORMAT:
        d.fail("format", f"unsupported format {d.data.get('format')!r}")
    if d.get("kind", str) != kind:
        d.fail("kind", f"expected {kind!r}, got {d.data['kind']!r}")


def complex_from(d: _Doc) -> CubeComplex:
    _check_kind(d, "complex")
    n = d.get("n_vertices", int)
    E = _int_array(d, "edges", (3,))
    S = _int_array(d, "squares", (4,))
    cubes = d.get("cubes", list)
    C = np.zeros((len(cubes), 3, 4), dtype=np.int64)
    F = np.zeros((len(cubes), 6), dtype=np.int64)
    for i, c in enumerate(cubes):
        try:
            C[i] = np.asarray(c["axes"], dtype=np.int64)
            F[i] = np.asarray(c["faces"], dtype=np.int64)
        except (KeyError, ValueError, TypeError):
            d.fail("cubes", f"3-cube {i} must have axes (3x4) and faces (6)")
    return validate_complex(n, E[:, 0], E[:, 1], E[:, 2], S, C, F)


def kneser_from(d: _Doc) -> KneserComplex:
    _check_kind(d, "kneser")
    ground = d.get("ground", list)
    if d.data.get("label_type", "str") == "int":
        try:
            ground = [int(a) for a in ground]
        except ValueError:
            d.fail("ground", "label_type is int but labels are not integers")
    try:
        L = build_kneser(LabelSet(tuple(ground)), d.get("n", int))
    except ValueError as err:
        d.fail("n", str(err))
    if "vertices" in d.data:
        want = [[str(L.ground.elements[i]) for i in s] for s in L.vertices]
        if d.data["vertices"] != want:
            d.fail("vertices", "do not match the n-subsets of the ground set in lexicographic order")
    return L


def _assignment_from(d: _Doc) -> DeltaAssignment:
    L = kneser_from(d.sub("L"))
    lab = _int_array(d, "end_label", ())
    return DeltaAssignment(L, lab)


def coloring_from(d: _Doc) -> LColoring:
    _check_kind(d, "coloring")
    X = complex_from(d.sub("complex"))
    L = kneser_from(d.sub("L"))
    colors = np.full(X.n_edges, -1, dtype=np.int64)
    for row in d.get("colors", list):
        try:
            e, c = int(row[0]), int(row[1])
        except (TypeError, ValueError, IndexError):
            d.fail("colors", "rows must be [edge, colour, subset]")
        if not (0 <= e < X.n_edges and 0 <= c < L.num_vertices):
            d.fail("colors", f"row {row[:2]} out of range")
        colors[e] = c
        colors[X.rev[e]] = c
    if np.any(colors < 0):
        d.fail("colors", f"1-cube {int(np.flatnonzero(colors < 0)[0])} has no colour")
    q = d.get("q")
    return LColoring(X, L, colors, None if q is None else np.asarray(q, dtype=np.int64))


def cover_from(d: _Doc) -> CoverMap:
    _check_kind(d, "cover")
    return CoverMap(
        complex_from(d.sub("total")),
        complex_from(d.sub("base")),
        _int_array(d, "vertex_map", ()),
        _int_array(d, "edge_map", ()),
        _int_array(d, "square_map", ()),
        _int_array(d, "cube_map", ()),
        d.get("degree", int),
    )


def delta_from(d: _Doc):
    _check_kind(d, "delta")
    X = complex_from(d.sub("complex"))
    A = _assignment_from(d.sub("assignment"))
    phi = _int_array(d, "phi", (A.L.size,))
    if len(phi) != X.n_edges or len(A.end_label) != X.n_edges:
        d.fail("phi", "needs one row per directed 1-cube")
    if d.get("partial", bool):
        return PreDeltaCategory(X, A, phi)
    choices = {int(h): tuple(int(a) for a in p) for h, p in d.get("base_choices", list)}
    return DeltaCategory(X, A, phi, choices)


def chain_from(d: _Doc) -> list[str]:
    _check_kind(d, "chain")
    return [str(p) for p in d.get("covers", list)]


_READERS = {
    "complex": complex_from,
    "kneser": kneser_from,
    "coloring": coloring_from,
    "cover": cover_from,
    "delta": delta_from,
    "chain": chain_from,
}


def loads(text: str, kind: str | None = None) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, 1)
    d = _Doc(data, text)
    found = d.get("kind", str)
    if found not in _READERS:
        d.fail("kind", f"unknown kind {found!r}")
    if kind is not None and found != kind:
        d.fail("kind", f"expected {kind!r}, got {found!r}")
    return _READERS[found](d)


def read(path, kind: str | None = None) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as err:
        raise ParseError(f"{path}: not UTF-8: {err.reason}") from None
    try:
        return loads(text, kind)
    except ParseError as err:
        raise ParseError(f"{path}: {err.message}", err.line, err.column) from None
