"""Acceptance criteria, one test per criterion.

Each test records a ``PASS``/``FAIL`` line that the pytest summary prints.
Run this file directly (``python tests/test_acceptance.py``) to get the same
lines without pytest.
"""
import math
import random
import sys
import time
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402

from heintze import linalg as la  # noqa: E402
from heintze.algebra import bracket  # noqa: E402
from heintze.cli import EXIT_OK, cmd_compare  # noqa: E402
from heintze.corpus import (  # noqa: E402
    class_c_corpus,
    fixture_path,
    fixtures,
    heintze_corpus,
    load_fixture,
    random_graph_instance,
    random_heintze,
    random_vector,
    strictly_upper_triangular,
)
from heintze.errors import MuTooSmall  # noqa: E402
from heintze.groups import bch_product  # noqa: E402
from heintze.invariants import (  # noqa: E402
    JORDAN_FORM,
    NOT_DISTINGUISHED,
    compare,
    invariant_ideals_in_chains,
    multiplicativity_holds,
    normalize_scale,
    scale_heintze,
    spectrum_profile,
)
from heintze.metrics import (  # noqa: E402
    QuasiMetricModel,
    diag_comparison_check,
    hausdorff_dim_estimate,
    lemma31_check,
    segment,
    tau_action,
)
from heintze.polynomial import Polynomial  # noqa: E402
from heintze.spectral import JordanChain, grading_check, jordan_basis_bracket_audit  # noqa: E402

F = Fraction


@contextmanager
def criterion(number: int, title: str, budget: float | None = None):
    start = time.perf_counter()
    detail = ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed >= budget:
            raise AssertionError(f"took {elapsed:.2f}s, budget {budget}s")
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        detail = f" ({type(exc).__name__}: {exc})".replace("\n", " ")[:200]
        ACCEPTANCE_LINES.append(f"FAIL criterion {number:2d}: {title} [{elapsed:.2f}s]{detail}")
        raise
    ACCEPTANCE_LINES.append(f"PASS criterion {number:2d}: {title} [{elapsed:.2f}s]")


def test_criterion_01_profile():
    with criterion(1, "spectrum profiles of both example groups: jumps {6,9,18}, dims [0,3,5,6]", 1.0):
        for name in ("gamma1", "gamma2"):
            prof = spectrum_profile(load_fixture(name))
            assert prof.jump_points == (6, 9, 18), (name, prof.jump_points)
            assert prof.dims == (0, 3, 5, 6), (name, prof.dims)


def test_criterion_02_char_poly():
    with criterion(2, "example pair distinguished by characteristic polynomial, no rescaling helps", 1.0):
        r = cmd_compare(str(fixture_path("pair-gamma")))
        assert r.exit_code == EXIT_OK
        assert r.data["outcome"] == "DistinguishedBy(CharPoly)"
        expected = [Polynomial.from_roots([1, 2, 3, 3, 4, 5]), Polynomial.from_roots([1, 2, 3, 3, 3, 6])]
        got = [ev["coefficients"] for ev in r.data["evidence"]["char_poly"]]
        assert got == [p.to_strings() for p in expected]
        g1, g2 = load_fixture("gamma1"), load_fixture("gamma2")
        _, scaled, s = normalize_scale(g1, g2)
        assert s == 1 and scaled.char_poly() != g1.char_poly()
        # equal polynomials force equal traces, and both traces are 18, so s = 1 is the only candidate
        assert g1.trace == g2.trace == 18
        for s in (F(1, 2), F(2, 3), F(1), F(3, 2), F(2)):
            assert scale_heintze(g2, s).char_poly() != g1.char_poly()


def test_criterion_03_scaling_invariance():
    with criterion(3, "compare(h, s*h) is NotDistinguished on 20 random groups"):
        rng = random.Random(2024)
        for _ in range(20):
            h = random_heintze(rng)
            s = F(rng.randint(1, 12), rng.randint(1, 12))
            v = compare(h, scale_heintze(h, s))
            assert v.outcome == NOT_DISTINGUISHED, (h.name, s, v.outcome)


def test_criterion_04_multiplicativity():
    with criterion(4, "char poly multiplicative along every invariant ideal in the normalizer chains"):
        total = 0
        for h in heintze_corpus(0, 10):
            start = time.perf_counter()
            for k in invariant_ideals_in_chains(h):
                total += 1
                assert multiplicativity_holds(h.derivation, k), h.name
            assert time.perf_counter() - start < 1.0, h.name
        assert total > 0


def test_criterion_05_jordan_form():
    with criterion(5, "Heisenberg diag(1,1,2) vs Jordan block: same char poly, JordanForm verdict"):
        hd, hb = load_fixture("heisenberg-diag"), load_fixture("heisenberg-block")
        assert hd.char_poly() == hb.char_poly() == Polynomial.from_roots([1, 1, 2])
        assert compare(hd, hb).outcome == JORDAN_FORM
        assert compare(hb, hd).outcome == JORDAN_FORM


def test_criterion_06_grading():
    with criterion(6, "grading check on all fixtures and 100 random graph instances"):
        for h in fixtures():
            assert grading_check(h.derivation, h.eigen).passed, h.name
        rng = random.Random(6)
        for k in range(100):
            h = random_graph_instance(rng)
            assert grading_check(h.derivation, h.eigen).passed, k


def test_criterion_07_audit():
    with criterion(7, "Jordan-basis bracket audit on class C, negative control flagged"):
        corpus = class_c_corpus(7, 16)
        assert sum(not h.is_diagonalizable() for h in corpus) >= 3
        for h in corpus:
            assert jordan_basis_bracket_audit(h.derivation).passed, h.name
        hb = load_fixture("heisenberg-block")
        chain = hb.jordan.chains[0]
        assert chain.size == 2
        bad = replace(hb.jordan, chains=(JordanChain(chain.eigenvalue, tuple(reversed(chain.vectors))),)
                      + tuple(hb.jordan.chains[1:]))
        assert not jordan_basis_bracket_audit(hb.derivation, bad).passed


def test_criterion_08_bch():
    with criterion(8, "BCH associativity on 500 triples over classes 2-4, Heisenberg product exact"):
        rng = random.Random(8)
        algebras = [strictly_upper_triangular(n) for n in (3, 4, 5)]
        assert [a.nilpotency_class for a in algebras] == [2, 3, 4]
        for k in range(500):
            a = algebras[k % 3]
            x, y, z = (random_vector(rng, a.dim) for _ in range(3))
            assert bch_product(a, bch_product(a, x, y), z) == bch_product(a, x, bch_product(a, y, z))
        k1 = load_fixture("heisenberg-diag").algebra
        for _ in range(50):
            x, y = random_vector(rng, 3), random_vector(rng, 3)
            assert bch_product(k1, x, y) == la.add(la.add(x, y), la.scale(F(1, 2), bracket(k1, x, y)))


def test_criterion_09_homogeneity():
    with criterion(9, "homogeneity of the model quasi-metric below 1e-9 on 10^4 samples", 10.0):
        worst = 0.0
        for h in fixtures():
            if not h.is_diagonalizable():
                continue
            m = QuasiMetricModel(h)
            rng = np.random.default_rng(9)
            x = rng.standard_normal((10_000, h.dim))
            y = rng.standard_normal((10_000, h.dim))
            t = rng.uniform(-5.0, 5.0, 10_000)
            moved = m.distance(tau_action(h, t, x), tau_action(h, t, y))
            err = np.abs(np.exp(-t) * moved / m.distance(x, y) - 1.0)
            worst = max(worst, float(err.max()))
        assert worst < 1e-9, worst


def test_criterion_10_hausdorff():
    with criterion(10, "box-counting dimension of eigen-direction segments within 10% for lambda in {1, 5}", 60.0):
        h = load_fixture("gamma1")
        m = QuasiMetricModel(h)
        for idx, lam in ((0, 1.0), (4, 5.0)):
            assert h.derivation.matrix[idx][idx] == lam
            direction = [0] * 6
            direction[idx] = 1
            est = hausdorff_dim_estimate(m, segment(direction))
            counts = [math.exp(p[1]) for p in est.regression_points]
            assert max(counts) / min(counts) >= 90, counts
            assert abs(est.value - lam) <= 0.10 * lam, (lam, est.value)


def test_criterion_11_growth_floor():
    with criterion(11, "c_hat > 0 without downward trend at mu = 6; mu = lambda_d rejected", 30.0):
        m = QuasiMetricModel(load_fixture("gamma1"))
        rep = lemma31_check(m, 6.0, 100_000, seed=11)
        assert rep.samples == 100_000
        assert rep.c_hat > 0 and rep.violations == 0, rep.to_dict()
        with pytest.raises(MuTooSmall):
            lemma31_check(m, 5.0, 100)


def test_criterion_12_sandwich():
    with criterion(12, "finite sandwich constant for mu in {1.1, 1.5, 2}, non-increasing in mu", 30.0):
        hb = load_fixture("heisenberg-block")
        consts = []
        for mu in (1.1, 1.5, 2.0):
            rep = diag_comparison_check(hb, mu, 2000, seed=12)
            assert math.isfinite(rep.constant) and rep.violations == 0
            consts.append(rep.constant)
        assert consts[0] >= consts[1] >= consts[2], consts


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except BaseException:
            failed += 1
    for line in ACCEPTANCE_LINES:
        print(line)
    sys.exit(1 if failed else 0)
