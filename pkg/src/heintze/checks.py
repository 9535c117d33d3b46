"""Cross-module property suite run by ``heintze check``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg as la
from .algebra import NilpotentLieAlgebra, antisymmetry_violations, jacobi_violations, validate_algebra
from .corpus import class_c_corpus, heintze_corpus, random_graph_instance, random_heintze, random_vector, strictly_upper_triangular
from .errors import HeintzeError, InputError
from .graphs import build_algebra
from .groups import BCH_MAX_DEPTH, bch_product
from .invariants import HeintzeData, NOT_DISTINGUISHED, compare, invariant_ideals_in_chains, multiplicativity_holds, scale_heintze
from .io import _kind, _resolve, parse_graph, parse_heintze, parse_matrix, raw_structure
from .metrics import QuasiMetricModel
from .spectral import grading_check, is_class_c, jordan_basis_bracket_audit, leibniz_violations


@dataclass
class PropertyResult:
    name: str
    subject: str
    passed: bool
    checked: int = 0
    counterexample: object = None

    def to_dict(self) -> dict:
        out = {"property": self.name, "subject": self.subject, "passed": self.passed, "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class CheckReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(self, r: PropertyResult) -> None:
        self.results.append(r)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "results": [r.to_dict() for r in self.results]}


def _idx(t) -> list:
    return [i + 1 for i in t]


def check_jacobi(a: NilpotentLieAlgebra, subject: str) -> PropertyResult:
    bad = antisymmetry_violations(a.structure)
    if bad:
        return PropertyResult("antisymmetry", subject, False, 1, {"indices": _idx(bad[0])})
    bad = jacobi_violations(a)
    n = a.dim
    return PropertyResult("jacobi", subject, not bad, n * (n - 1) * (n - 2) // 6,
                          {"indices": _idx(bad[0])} if bad else None)


def check_leibniz(a: NilpotentLieAlgebra, m, subject: str) -> PropertyResult:
    bad = leibniz_violations(a, m)
    return PropertyResult("leibniz", subject, not bad, a.dim * (a.dim - 1) // 2,
                          {"indices": _idx(bad[0])} if bad else None)


def check_grading(h: HeintzeData, subject: str) -> PropertyResult:
    rep = grading_check(h.derivation, h.eigen)
    return PropertyResult("grading", subject, rep.passed, rep.checked, rep.violations[0] if rep.violations else None)


def check_multiplicativity(h: HeintzeData, subject: str) -> PropertyResult:
    ideals = invariant_ideals_in_chains(h)
    for k in ideals:
        if not multiplicativity_holds(h.derivation, k):
            return PropertyResult("charpoly-multiplicativity", subject, False, len(ideals),
                                  {"ideal_basis": [[la.format_fraction(c) for c in v] for v in k.basis]})
    return PropertyResult("charpoly-multiplicativity", subject, True, len(ideals))


def check_bch(a: NilpotentLieAlgebra, subject: str, trials: int, seed: int) -> PropertyResult:
    if (a.nilpotency_class or 1) > BCH_MAX_DEPTH:
        return PropertyResult("bch-associativity", subject, True, 0)
    rng = random.Random(seed)
    for t in range(trials):
        x, y, z = (random_vector(rng, a.dim) for _ in range(3))
        left = bch_product(a, bch_product(a, x, y), z)
        right = bch_product(a, x, bch_product(a, y, z))
        if left != right:
            return PropertyResult("bch-associativity", subject, False, t + 1,
                                  {"x": [str(c) for c in x], "y": [str(c) for c in y], "z": [str(c) for c in z]})
        if any(bch_product(a, x, tuple(-c for c in x))):
            return PropertyResult("bch-inverse", subject, False, t + 1, {"x": [str(c) for c in x]})
    return PropertyResult("bch-associativity", subject, True, trials)


def check_homogeneity(h: HeintzeData, subject: str, samples: int, seed: int, tol: float = 1e-9) -> PropertyResult:
    if not h.is_diagonalizable():
        return PropertyResult("homogeneity", subject, True, 0)
    m = QuasiMetricModel(h)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, h.dim))
    y = rng.standard_normal((samples, h.dim))
    t = rng.uniform(-5.0, 5.0, size=samples)
    base = m.distance(x, y)
    moved = m.distance(m.semisimple_flow(t, x), m.semisimple_flow(t, y))
    err = np.abs(np.exp(-t) * moved / base - 1.0)
    worst = int(np.argmax(err))
    ok = bool(err[worst] < tol)
    return PropertyResult("homogeneity", subject, ok, samples, None if ok else {"t": float(t[worst]), "error": float(err[worst])})


def check_audit(h: HeintzeData, subject: str) -> PropertyResult | None:
    if not is_class_c(h.algebra):
        return None
    rep = jordan_basis_bracket_audit(h.derivation)
    return PropertyResult("jordan-bracket-audit", subject, rep.passed, rep.checked, rep.violations[0] if rep.violations else None)


def check_jordan_conjugation(h: HeintzeData, subject: str) -> PropertyResult:
    p = h.jordan.basis_matrix()
    ok = la.matmul(h.derivation.matrix, p) == la.matmul(p, h.jordan.jordan_matrix())
    return PropertyResult("jordan-conjugation", subject, ok, 1)


def check_scaling(h: HeintzeData, subject: str, s: Fraction) -> PropertyResult:
    v = compare(h, scale_heintze(h, s))
    ok = v.outcome == NOT_DISTINGUISHED
    return PropertyResult("scaling-invariance", subject, ok, 1, None if ok else {"s": str(s), "outcome": v.outcome})


def heintze_properties(h: HeintzeData, subject: str, seed: int, samples: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    s = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    out = [
        check_jacobi(h.algebra, subject),
        check_leibniz(h.algebra, h.derivation.matrix, subject),
        check_grading(h, subject),
        check_jordan_conjugation(h, subject),
        check_multiplicativity(h, subject),
        check_bch(h.algebra, subject, 5, seed),
        check_homogeneity(h, subject, samples, seed),
        check_scaling(h, subject, s),
    ]
    audit = check_audit(h, subject)
    if audit is not None:
        out.append(audit)
    return out


def run_corpus(seed: int = 0, samples: int = 200) -> CheckReport:
    rep = CheckReport()
    for k, h in enumerate(heintze_corpus(seed)):
        for r in heintze_properties(h, h.name or f"corpus-{k}", seed + k, samples):
            rep.add(r)
    for k, h in enumerate(class_c_corpus(seed + 1)):
        r = check_audit(h, f"classC-{k}")
        if r is not None:
            rep.add(r)
    rng = random.Random(seed)
    for k in range(20):
        h = random_graph_instance(rng)
        rep.add(check_grading(h, f"random-graph-{k}"))
    for k in range(5):
        h = random_heintze(rng)
        rep.add(check_scaling(h, f"random-{k}", Fraction(rng.randint(1, 7), rng.randint(1, 7))))
    for n in range(3, 6):
        a = strictly_upper_triangular(n)
        rep.add(check_bch(a, f"upper-triangular-{n}", 10, seed + n))
    return rep


def run_document(path: str | Path, seed: int = 0, samples: int = 200) -> CheckReport:
    """Properties of a user file; broken structure is reported instead of rejected."""
    doc, base = _resolve(str(path), None)
    kind = _kind(doc)
    rep = CheckReport()
    subject = str(doc.get("name", Path(path).stem))
    if kind == "pair":
        for key in ("first", "second"):
            if key not in doc:
                raise InputError(f"pair: missing '{key}'")
            sub_doc, sub_base = _resolve(doc[key], base)
            rep.results += _document_results(sub_doc, sub_base, f"{subject}.{key}", seed, samples)
        return rep
    rep.results += _document_results(doc, base, subject, seed, samples)
    return rep


def _raw_algebra(doc: dict, base) -> NilpotentLieAlgebra:
    doc, base = _resolve(doc, base)
    if _kind(doc) == "graph":
        return build_algebra(parse_graph(doc))
    n, structure, labels = raw_structure(doc)
    return NilpotentLieAlgebra(n, structure, labels)


def _document_results(doc: dict, base, subject: str, seed: int, samples: int) -> list[PropertyResult]:
    kind = _kind(doc)
    alg_node = doc if kind in ("algebra", "graph") else doc.get("algebra")
    if alg_node is None:
        raise InputError("heintze: missing 'algebra'")
    raw = _raw_algebra(alg_node, base)
    first = check_jacobi(raw, subject)
    if not first.passed:
        return [first]
    try:
        a = validate_algebra(raw.structure, raw.labels)
    except HeintzeError as exc:
        return [first, PropertyResult("nilpotency", subject, False, 1, {"error": str(exc)})]
    if kind == "algebra" or (kind == "graph" and "weights" not in doc):
        return [first, check_bch(a, subject, 10, seed)]
    if kind in ("heintze", "derivation") and ("matrix" in doc or "diagonal" in doc):
        if "matrix" in doc:
            m = parse_matrix(doc["matrix"], a.dim)
        else:
            m = parse_matrix([[x if i == j else 0 for j in range(a.dim)] for i, x in enumerate(doc["diagonal"])],
                             a.dim, "diagonal")
        lz = check_leibniz(a, m, subject)
        if not lz.passed:
            return [first, lz]
    try:
        h = parse_heintze(doc, base)
    except HeintzeError as exc:
        return [first, PropertyResult("heintze-spectrum", subject, False, 1, {"error": str(exc)})]
    return heintze_properties(h, subject, seed, samples)
