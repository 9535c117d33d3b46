import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heintze import linalg as la
from heintze.algebra import (
    bracket,
    center,
    change_basis,
    derived_subalgebra,
    is_ideal,
    is_subalgebra,
    jacobi_violations,
    lie_span,
    lower_central_series,
    normalizer,
    normalizer_chain,
    quotient,
    structure_from_brackets,
    subalgebra,
    validate_algebra,
)
from heintze.corpus import heisenberg_sum, random_basis_change, random_graph, random_vector, strictly_upper_triangular
from heintze.errors import AntisymmetryViolation, DimensionMismatch, JacobiViolation, NotAnIdeal, NotASubalgebra, NotNilpotent
from heintze.graphs import build_algebra
from heintze.subspace import Subspace

from conftest import abelian


def e(n, *idx):
    return Subspace.span(n, [la.unit(n, i) for i in idx])


@pytest.fixture(scope="module")
def n1(gamma1):
    return gamma1.algebra


@pytest.fixture(scope="module")
def n2(gamma2):
    return gamma2.algebra


class TestValidation:
    def test_abelian(self):
        assert abelian(3).nilpotency_class == 1

    def test_heisenberg(self, k1):
        assert k1.nilpotency_class == 2

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            validate_algebra(structure_from_brackets(2, [(0, 1, 0, 1)]))

    def test_jacobi_violation_reports_indices(self):
        s = structure_from_brackets(4, [(0, 1, 2, 1), (1, 2, 3, 1), (0, 2, 3, 1), (0, 3, 1, 1)])
        with pytest.raises(JacobiViolation) as exc:
            validate_algebra(s)
        assert str(exc.value) == "JacobiViolation(1,2,3)"

    def test_antisymmetry_violation(self):
        # both orders given with the same sign
        s = structure_from_brackets(3, [(0, 1, 2, 1), (1, 0, 2, 1)])
        with pytest.raises(AntisymmetryViolation):
            validate_algebra(s)

    def test_upper_triangular_classes(self):
        for n in range(3, 8):
            assert strictly_upper_triangular(n).nilpotency_class == n - 1


class TestBracket:
    def test_heisenberg(self, k1):
        assert bracket(k1, (1, 0, 0), (0, 1, 0)) == (0, 0, 1)

    def test_gamma1(self, n1):
        assert bracket(n1, la.unit(6, 0), la.unit(6, 1)) == la.unit(6, 3)

    def test_dimension_guard(self, k1):
        with pytest.raises(DimensionMismatch):
            bracket(k1, (1, 0), (0, 1, 0))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_alternating_and_jacobi(self, seed):
        rng = random.Random(seed)
        a = strictly_upper_triangular(rng.randint(3, 5))
        x, y, z = (random_vector(rng, a.dim) for _ in range(3))
        assert la.is_zero(bracket(a, x, x))
        cyc = la.add(la.add(bracket(a, x, bracket(a, y, z)), bracket(a, y, bracket(a, z, x))), bracket(a, z, bracket(a, x, y)))
        assert la.is_zero(cyc)


class TestSpans:
    def test_lie_span_heisenberg(self, k1):
        assert lie_span(k1, [(1, 0, 0), (0, 1, 0)]).is_full()

    def test_lie_span_empty(self, k1):
        assert lie_span(k1, []).is_zero()

    def test_lie_span_gamma1(self, n1):
        assert lie_span(n1, [la.unit(6, 0), la.unit(6, 1)]) == e(6, 0, 1, 3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_lie_span_idempotent_monotone(self, seed):
        rng = random.Random(seed)
        a = build_algebra(random_graph(rng, 5))
        gens = [random_vector(rng, a.dim) for _ in range(2)]
        s1 = lie_span(a, gens[:1])
        s2 = lie_span(a, gens)
        assert lie_span(a, s2.basis) == s2
        assert s1 <= s2
        assert is_subalgebra(a, s2)

    def test_center_and_derived(self, k1, n2):
        assert center(k1) == e(3, 2)
        assert center(abelian(3)).is_full()
        assert derived_subalgebra(n2) == e(6, 4, 5)

    def test_structural_ideals(self, n1):
        assert is_ideal(n1, center(n1))
        assert is_ideal(n1, derived_subalgebra(n1))

    def test_lower_central_series(self):
        a = strictly_upper_triangular(4)
        dims = [s.dim for s in lower_central_series(a)]
        assert dims == [6, 3, 1, 0]


class TestNormalizers:
    def test_heisenberg_line(self, k1):
        assert normalizer(k1, e(3, 0)) == e(3, 0, 2)

    def test_full(self, k1):
        assert normalizer(k1, k1.full()).is_full()

    def test_three_eigenvalue_heisenberg(self):
        # X's weight 1, Y's weight 2, Z weight 3: N(V_1) = V_1 + V_3
        a = heisenberg_sum(2)
        assert normalizer(a, e(5, 0, 1)) == e(5, 0, 1, 4)

    def test_not_a_subalgebra(self, k1):
        with pytest.raises(NotASubalgebra):
            normalizer(k1, e(3, 0, 1))

    def test_chain_heisenberg(self, k1):
        chain = normalizer_chain(k1, e(3, 0))
        assert chain == [e(3, 0), e(3, 0, 2), k1.full()]
        assert len(chain) - 1 == 2

    def test_chain_from_ideal(self, k1):
        assert len(normalizer_chain(k1, center(k1))) - 1 == 1

    def test_chain_gamma1(self, gamma1, n1):
        from heintze.invariants import h_alpha

        start = h_alpha(gamma1)
        chain = normalizer_chain(n1, start)
        assert chain[-1].is_full()
        for small, big in zip(chain, chain[1:]):
            assert small < big
            assert normalizer(n1, small) == big

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_normalizer_contains(self, seed):
        rng = random.Random(seed)
        a = build_algebra(random_graph(rng, 5))
        h = lie_span(a, [random_vector(rng, a.dim)])
        nh = normalizer(a, h)
        assert h <= nh
        if not h.is_full():
            assert h < nh


class TestQuotients:
    def test_heisenberg_mod_center(self, k1):
        q = quotient(k1, center(k1))
        assert q.algebra.dim == 2 and q.algebra.is_abelian()

    def test_mod_zero(self, k1):
        q = quotient(k1, k1.zero())
        assert q.algebra.structure == k1.structure

    def test_requires_ideal(self, k1, n1):
        with pytest.raises(NotAnIdeal):
            quotient(k1, e(3, 0))
        k = e(6, 0, 1, 3, 4, 5)
        assert is_ideal(n1, k)
        assert quotient(n1, k).algebra.dim == 1

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_projection_is_morphism(self, seed):
        rng = random.Random(seed)
        a = strictly_upper_triangular(rng.randint(3, 5))
        k = lower_central_series(a)[1]
        q = quotient(a, k)
        assert q.algebra.dim == a.dim - k.dim
        x, y = random_vector(rng, a.dim), random_vector(rng, a.dim)
        assert q.project(bracket(a, x, y)) == bracket(q.algebra, q.project(x), q.project(y))

    def test_subalgebra_presentation(self, k1):
        s = subalgebra(k1, e(3, 0, 2))
        assert s.algebra.dim == 2 and s.algebra.is_abelian()


def test_change_basis_preserves_invariants():
    rng = random.Random(4)
    a = heisenberg_sum(2, 1)
    p = random_basis_change(rng, a.dim)
    b = change_basis(a, p)
    assert not jacobi_violations(b)
    assert center(b).dim == center(a).dim
    assert derived_subalgebra(b).dim == derived_subalgebra(a).dim
