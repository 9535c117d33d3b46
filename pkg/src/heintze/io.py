"""JSON documents describing algebras, derivations, graphs and pairs.

Indices in documents are 1-based.  Every rational is an integer or a string
such as ``"3"`` or ``"-5/2"``; JSON floats are rejected so that exact input
stays exact.

Document kinds
--------------
``algebra``
    ``{"kind": "algebra", "dimension": n, "labels": [...], "brackets": [[i, j, k, c], ...]}``
    meaning ``[e_i, e_j] = c e_k + ...``; ``[e_j, e_i]`` is filled in by
    antisymmetry unless both orders are listed.
``graph``
    ``{"kind": "graph", "vertices": p, "edges": [[s, t], ...], "weights": [...]}``;
    with ``weights`` it describes a Heintze group with the diagonal derivation.
``heintze`` (alias ``derivation``)
    ``{"kind": "heintze", "algebra": <algebra or graph>, "matrix": [[...], ...]}``
    where column ``j`` of ``matrix`` is the image of ``e_j``; ``"diagonal": [...]``
    may replace ``matrix``.
``pair``
    ``{"kind": "pair", "first": <heintze>, "second": <heintze>}``.

Any nested document may be replaced by a path, resolved relative to the file
that references it.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import linalg as la
from .algebra import NilpotentLieAlgebra, structure_from_brackets, validate_algebra
from .errors import InputError
from .graphs import DirectedGraph, build_algebra, derivation_from_weights
from .invariants import HeintzeData, make_heintze
from .spectral import validate_derivation

KINDS = ("algebra", "graph", "heintze", "derivation", "pair")


def _reject_float(text: str):
    raise InputError(f"floating-point literal {text} not allowed; write rationals as strings")


def _reject_constant(text: str):
    raise InputError(f"non-finite literal {text} not allowed")


def loads(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=_reject_float, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("top-level document must be an object")
    return doc


def load_document(path: str | Path) -> tuple[dict, Path]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc}") from exc
    return loads(text), p.parent


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: expected an integer or rational string, got {x!r}")
    try:
        return la.to_fraction(x)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _index(x: Any, n: int, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: index must be an integer, got {x!r}")
    if not 1 <= x <= n:
        raise InputError(f"{where}: index {x} outside 1..{n}")
    return x - 1


def _resolve(node: Any, base: Path | None) -> tuple[dict, Path | None]:
    if isinstance(node, str):
        path = Path(node) if base is None else base / node
        return load_document(path)
    if not isinstance(node, dict):
        raise InputError(f"expected a document or a path, got {node!r}")
    return node, base


def _kind(doc: dict) -> str:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"unknown document kind {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


def raw_structure(doc: dict) -> tuple[int, tuple, tuple]:
    """Structure constants of an algebra document without any validation beyond the schema."""
    n = doc.get("dimension")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("algebra: 'dimension' must be a positive integer")
    triples = []
    for pos, entry in enumerate(doc.get("brackets", []), start=1):
        if not isinstance(entry, list) or len(entry) != 4:
            raise InputError(f"bracket {pos}: expected [i, j, k, value]")
        i, j, k = (_index(entry[t], n, f"bracket {pos}") for t in range(3))
        triples.append((i, j, k, _rational(entry[3], f"bracket {pos}")))
    labels = tuple(doc.get("labels", ()))
    if labels and len(labels) != n:
        raise InputError("algebra: one label per basis vector required")
    return n, structure_from_brackets(n, triples), labels


def parse_graph(doc: dict) -> DirectedGraph:
    p = doc.get("vertices")
    if isinstance(p, bool) or not isinstance(p, int) or p < 1:
        raise InputError("graph: 'vertices' must be a positive integer")
    edges = []
    for pos, e in enumerate(doc.get("edges", []), start=1):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"edge {pos}: expected [source, target]")
        edges.append(tuple(_index(v, p, f"edge {pos}") for v in e))
    return DirectedGraph(p, tuple(edges))


def parse_algebra(node: Any, base: Path | None = None) -> NilpotentLieAlgebra:
    doc, base = _resolve(node, base)
    kind = _kind(doc)
    if kind == "graph":
        return build_algebra(parse_graph(doc))
    if kind != "algebra":
        raise InputError(f"expected an algebra or graph document, got {kind!r}")
    n, structure, labels = raw_structure(doc)
    return validate_algebra(structure, labels or None)


def parse_matrix(rows: Any, n: int, where: str = "matrix") -> tuple:
    if not isinstance(rows, list) or len(rows) != n:
        raise InputError(f"{where}: expected {n} rows")
    out = []
    for r, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{where}: row {r} must have {n} entries")
        out.append(tuple(_rational(x, f"{where}[{r}]") for x in row))
    return tuple(out)


def parse_heintze(node: Any, base: Path | None = None) -> HeintzeData:
    doc, base = _resolve(node, base)
    kind = _kind(doc)
    name = str(doc.get("name", ""))
    if kind == "graph":
        if "weights" not in doc:
            raise InputError("graph document needs 'weights' to define a Heintze group")
        g = parse_graph(doc)
        a = build_algebra(g)
        w = [_rational(x, "weights") for x in doc["weights"]]
        return make_heintze(a, derivation_from_weights(g, w, a), name)
    if kind not in ("heintze", "derivation"):
        raise InputError(f"expected a Heintze document, got {kind!r}")
    if "algebra" not in doc:
        raise InputError("heintze: missing 'algebra'")
    a = parse_algebra(doc["algebra"], base)
    if "matrix" in doc:
        m = parse_matrix(doc["matrix"], a.dim)
    elif "diagonal" in doc:
        diag = [_rational(x, "diagonal") for x in doc["diagonal"]]
        if len(diag) != a.dim:
            raise InputError(f"diagonal: expected {a.dim} entries")
        m = tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(a.dim)) for i in range(a.dim))
    else:
        raise InputError("heintze: give 'matrix' or 'diagonal'")
    return make_heintze(a, validate_derivation(a, m), name)


@dataclass
class Pair:
    first: HeintzeData
    second: HeintzeData


def parse_pair(node: Any, base: Path | None = None) -> Pair:
    doc, base = _resolve(node, base)
    if _kind(doc) != "pair":
        raise InputError("expected a pair document")
    for key in ("first", "second"):
        if key not in doc:
            raise InputError(f"pair: missing '{key}'")
    return Pair(parse_heintze(doc["first"], base), parse_heintze(doc["second"], base))


def parse_any(node: Any, base: Path | None = None):
    doc, base = _resolve(node, base)
    kind = _kind(doc)
    if kind == "pair":
        return parse_pair(doc, base)
    if kind == "algebra" or (kind == "graph" and "weights" not in doc):
        return parse_algebra(doc, base)
    return parse_heintze(doc, base)


def algebra_document(a: NilpotentLieAlgebra) -> dict:
    brackets = []
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            for k, c in enumerate(a.structure[i][j]):
                if c:
                    brackets.append([i + 1, j + 1, k + 1, la.format_fraction(c)])
    return {"kind": "algebra", "dimension": a.dim, "labels": list(a.labels), "brackets": brackets}


def heintze_document(h: HeintzeData) -> dict:
    doc = {
        "kind": "heintze",
        "algebra": algebra_document(h.algebra),
        "matrix": [[la.format_fraction(c) for c in row] for row in h.derivation.matrix],
    }
    if h.name:
        doc["name"] = h.name
    return doc


def dumps(obj: Any) -> str:
    """Canonical machine output: sorted keys, fixed indentation."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


__all__ = [
    "Pair",
    "algebra_document",
    "dumps",
    "heintze_document",
    "load_document",
    "loads",
    "parse_algebra",
    "parse_any",
    "parse_graph",
    "parse_heintze",
    "parse_matrix",
    "parse_pair",
    "raw_structure",
]
