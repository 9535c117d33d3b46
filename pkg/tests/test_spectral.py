import random
from dataclasses import replace
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from heintze import linalg as la
from heintze.corpus import class_c_corpus, random_basis_change, random_class_c_derivation, random_graph_instance, rebase
from heintze.errors import IrrationalOrComplexSpectrum, LeibnizViolation, NotClassC
from heintze.polynomial import Polynomial
from heintze.spectral import (
    JordanChain,
    block_sizes_from_ranks,
    char_poly,
    eigen_decomposition,
    grading_check,
    jordan_basis_bracket_audit,
    jordan_data,
    leibniz_violations,
    rational_eigenvalues,
    semisimple_nilpotent_split,
    validate_derivation,
)
from heintze.subspace import Subspace

from conftest import abelian, diag

ALPHA_PRIME = ((1, 1, 0), (0, 1, 0), (0, 0, 2))


def sympy_charpoly(m):
    x = sympy.symbols("x")
    p = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in m]).charpoly(x)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]


class TestDerivations:
    def test_identity_on_heisenberg_fails(self, k1):
        with pytest.raises(LeibnizViolation) as exc:
            validate_derivation(k1, diag(1, 1, 1))
        assert str(exc.value) == "LeibnizViolation(1,2)"

    def test_identity_on_abelian(self):
        validate_derivation(abelian(3), diag(1, 1, 1))

    def test_heisenberg_diag(self, k1):
        validate_derivation(k1, diag(1, 1, 2))

    def test_gamma1_weights(self, gamma1):
        assert gamma1.derivation.matrix == diag(1, 2, 3, 3, 5, 4)


class TestCharPoly:
    def test_gamma1(self, gamma1):
        assert char_poly(gamma1.derivation.matrix) == Polynomial.from_roots([1, 2, 3, 3, 4, 5])

    def test_zero(self):
        assert char_poly(la.zero_matrix(4)) == Polynomial((0, 0, 0, 0, 1))

    def test_companion(self):
        # x^3 - 2x^2 + x
        comp = la.mat([[0, 0, 0], [1, 0, -1], [0, 1, 2]])
        assert char_poly(comp) == Polynomial((0, 1, -2, 1))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.lists(
        st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=n, max_size=n),
        min_size=n, max_size=n)))
    def test_matches_sympy(self, m):
        assert list(char_poly(m).coeffs) == sympy_charpoly(m)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10_000))
    def test_similarity_invariant(self, seed):
        rng = random.Random(seed)
        h = random_graph_instance(rng)
        p = random_basis_change(rng, h.dim)
        m2 = la.matmul(la.matmul(la.inverse(p), h.derivation.matrix), p)
        assert char_poly(m2) == h.char_poly()


class TestEigen:
    def test_beta(self, gamma2):
        assert rational_eigenvalues(gamma2.derivation.matrix) == [1, 2, 3, 3, 3, 6]

    def test_single(self):
        assert rational_eigenvalues(diag(5)) == [5]

    def test_rotation_refused(self):
        with pytest.raises(IrrationalOrComplexSpectrum):
            rational_eigenvalues(la.mat([[0, -1], [1, 0]]))

    def test_irrational_refused(self):
        with pytest.raises(IrrationalOrComplexSpectrum):
            rational_eigenvalues(la.mat([[0, 2], [1, 0]]))

    def test_decomposition_alpha(self, gamma1):
        e = gamma1.eigen
        u = lambda *i: Subspace.span(6, [la.unit(6, k) for k in i])
        assert e.eigenvalues == (1, 2, 3, 4, 5)
        assert e.spaces == (u(0), u(1), u(2, 3), u(5), u(4))

    def test_decomposition_alpha_prime(self, k1):
        e = eigen_decomposition(validate_derivation(k1, ALPHA_PRIME))
        assert e.spaces == (Subspace.span(3, [(1, 0, 0), (0, 1, 0)]), Subspace.span(3, [(0, 0, 1)]))

    def test_single_block_one_space(self):
        m = la.mat([[2, 1, 0], [0, 2, 1], [0, 0, 2]])
        e = eigen_decomposition(validate_derivation(abelian(3), m))
        assert len(e.spaces) == 1 and e.spaces[0].is_full()

    def test_generalized_spaces_annihilated(self):
        for h in class_c_corpus(3, 8):
            e = h.eigen
            assert sum(s.dim for s in e.spaces) == h.dim
            for lam, space, mult in zip(e.eigenvalues, e.spaces, e.multiplicities):
                power = la.mat_pow(la.shift(h.derivation.matrix, lam), mult)
                assert all(la.is_zero(la.matvec(power, v)) for v in space.basis)


class TestJordan:
    def test_diagonal(self, gamma2):
        assert dict(gamma2.jordan.blocks) == {1: (1,), 2: (1,), 3: (1, 1, 1), 6: (1,)}

    def test_alpha_prime(self, k1):
        jd = jordan_data(validate_derivation(k1, ALPHA_PRIME))
        assert dict(jd.blocks) == {1: (2,), 2: (1,)}
        assert block_sizes_from_ranks(la.mat(ALPHA_PRIME), Fraction(1), 2) == (2,)

    def test_conjugation(self):
        for h in class_c_corpus(5, 10):
            p = h.jordan.basis_matrix()
            assert la.matmul(h.derivation.matrix, p) == la.matmul(p, h.jordan.jordan_matrix())

    def test_matches_sympy_jordan(self):
        for h in class_c_corpus(7, 10):
            m = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in h.derivation.matrix])
            _, j = m.jordan_form()
            sizes: dict = {}
            k = 0
            while k < j.rows:
                size = 1
                while k + size < j.rows and j[k + size - 1, k + size] == 1:
                    size += 1
                lam = Fraction(int(sympy.fraction(j[k, k])[0]), int(sympy.fraction(j[k, k])[1]))
                sizes.setdefault(lam, []).append(size)
                k += size
            expected = {lam: tuple(sorted(v, reverse=True)) for lam, v in sizes.items()}
            assert dict(h.jordan.blocks) == expected

    def test_similarity_invariant(self):
        rng = random.Random(11)
        for _ in range(6):
            h = random_class_c_derivation(rng, 2, 1)
            h2 = rebase(h, random_basis_change(rng, h.dim))
            assert h2.jordan == h.jordan

    def test_scaled(self, heis_block):
        s = Fraction(3)
        jd = heis_block.jordan.scaled(s)
        m = la.mat_scale(s, heis_block.derivation.matrix)
        assert la.matmul(m, jd.basis_matrix()) == la.matmul(jd.basis_matrix(), jd.jordan_matrix())


class TestSplit:
    def test_alpha_prime(self, k1):
        sp = semisimple_nilpotent_split(validate_derivation(k1, ALPHA_PRIME))
        assert sp.delta.matrix == diag(1, 1, 2)
        assert sp.nu.matrix == la.mat([[0, 1, 0], [0, 0, 0], [0, 0, 0]])

    def test_diagonal(self, gamma1):
        sp = semisimple_nilpotent_split(gamma1.derivation)
        assert sp.delta.matrix == gamma1.derivation.matrix
        assert all(la.is_zero(r) for r in sp.nu.matrix)

    def test_properties_on_corpus(self):
        for h in class_c_corpus(9, 10):
            sp = semisimple_nilpotent_split(h.derivation)
            d, n = sp.delta.matrix, sp.nu.matrix
            assert not leibniz_violations(h.algebra, d)
            assert not leibniz_violations(h.algebra, n)
            assert la.matmul(d, n) == la.matmul(n, d)
            assert all(la.is_zero(r) for r in la.mat_pow(n, h.dim))


class TestGradingAndAudit:
    def test_grading_alpha(self, gamma1):
        rep = grading_check(gamma1.derivation)
        assert rep.passed and rep.checked > 0

    def test_grading_abelian(self):
        assert grading_check(validate_derivation(abelian(2), diag(1, 2))).passed

    def test_audit_alpha_prime(self, heis_block):
        assert jordan_basis_bracket_audit(heis_block.derivation).passed

    def test_audit_requires_class_c(self, gamma1):
        with pytest.raises(NotClassC):
            jordan_basis_bracket_audit(gamma1.derivation)

    def test_audit_flags_swapped_chain(self, heis_block):
        jd = heis_block.jordan
        chain = jd.chains[0]
        swapped = JordanChain(chain.eigenvalue, tuple(reversed(chain.vectors)))
        bad = replace(jd, chains=(swapped,) + tuple(jd.chains[1:]))
        rep = jordan_basis_bracket_audit(heis_block.derivation, bad)
        assert not rep.passed
        assert rep.violations[0]["kind"] == "chain"

    def test_audit_class_c_corpus(self):
        hs = class_c_corpus(2, 16)
        assert any(not h.is_diagonalizable() for h in hs)
        for h in hs:
            assert jordan_basis_bracket_audit(h.derivation).passed
