"""Exact spectral data of derivations: eigenspaces, Jordan chains, the
semisimple/nilpotent splitting, and the bracket audits built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import NilpotentLieAlgebra, bracket, derived_subalgebra
from .errors import (
    DimensionMismatch,
    HeintzeError,
    IrrationalOrComplexSpectrum,
    LeibnizViolation,
    NotClassC,
)
from .polynomial import Polynomial
from .subspace import Subspace


@dataclass(frozen=True)
class Derivation:
    algebra: NilpotentLieAlgebra
    matrix: tuple

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def apply(self, v: Sequence) -> tuple:
        return la.matvec(self.matrix, v)

    def scaled(self, s) -> "Derivation":
        return Derivation(self.algebra, la.mat_scale(la.to_fraction(s), self.matrix))


def leibniz_violations(a: NilpotentLieAlgebra, m, first_only: bool = False) -> list:
    bad = []
    e = [a.basis_vector(i) for i in range(a.dim)]
    images = [la.matvec(m, v) for v in e]
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            lhs = la.matvec(m, a.structure[i][j])
            rhs = la.add(bracket(a, images[i], e[j]), bracket(a, e[i], images[j]))
            if lhs != rhs:
                bad.append((i, j))
                if first_only:
                    return bad
    return bad


def validate_derivation(a: NilpotentLieAlgebra, matrix) -> Derivation:
    m = la.mat(matrix)
    if len(m) != a.dim or any(len(r) != a.dim for r in m):
        raise DimensionMismatch(f"derivation must be {a.dim} x {a.dim}")
    bad = leibniz_violations(a, m, first_only=True)
    if bad:
        raise LeibnizViolation(*bad[0])
    return Derivation(a, m)


def char_poly(m) -> Polynomial:
    """``det(xI - m)`` by the Faddeev-LeVerrier recurrence (exact over Q)."""
    m = la.mat(m)
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    prev = la.zero_matrix(n)
    for k in range(1, n + 1):
        mk = la.matmul(m, prev)
        mk = tuple(
            tuple(x + coeffs[n - k + 1] if i == j else x for j, x in enumerate(row))
            for i, row in enumerate(mk)
        )
        coeffs[n - k] = -la.trace(la.matmul(m, mk)) / k
        prev = mk
    return Polynomial(coeffs)


def _divisors(n: int) -> list:
    from sympy import divisors

    return divisors(abs(n))


def rational_roots(p: Polynomial) -> list:
    """All roots of ``p`` as ``(root, multiplicity)``, ascending; refuses non-split ``p``."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    rest = p.monic()
    found = []
    zero_mult = 0
    while rest.degree > 0 and rest.coeffs[0] == 0:
        rest = Polynomial(rest.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        found.append((Fraction(0), zero_mult))
    if rest.degree > 0:
        square_free = rest // rest.gcd(rest.derivative())
        ints = square_free.integer_primitive()
        bound = 1 + max(Fraction(abs(c), ints[-1]) for c in ints[:-1])
        roots = []
        q = square_free
        for den in _divisors(ints[-1]):
            for num in _divisors(ints[0]):
                if q.degree == 0:
                    break
                r = Fraction(num, den)
                if r > bound:
                    continue
                for cand in (r, -r):
                    if cand not in roots and q(cand) == 0:
                        roots.append(cand)
                        q = q // Polynomial((-cand, 1))
        if q.degree > 0:
            raise IrrationalOrComplexSpectrum(
                f"characteristic polynomial has an irreducible factor of degree >= 2 over Q: {q}"
            )
        for r in roots:
            mult = 0
            lin = Polynomial((-r, 1))
            while rest.degree > 0 and rest(r) == 0:
                rest = rest // lin
                mult += 1
            found.append((r, mult))
    return sorted(found)


def rational_eigenvalues(m) -> list:
    """Eigenvalues with repetition, ascending."""
    out = []
    for r, k in rational_roots(char_poly(m)):
        out.extend([r] * k)
    return out


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: tuple
    spaces: tuple
    multiplicities: tuple

    def space_of(self, lam) -> Subspace:
        return self.spaces[self.eigenvalues.index(lam)]

    def change_of_basis(self) -> tuple:
        cols = [b for s in self.spaces for b in s.basis]
        return la.from_columns(cols)

    def projections(self) -> list:
        """Projections onto each space along the others."""
        b = self.change_of_basis()
        binv = la.inverse(b)
        out = []
        start = 0
        for s in self.spaces:
            n = len(b)
            sel = tuple(
                tuple(Fraction(1) if (i == j and start <= i < start + s.dim) else Fraction(0) for j in range(n))
                for i in range(n)
            )
            out.append(la.matmul(la.matmul(b, sel), binv))
            start += s.dim
        return out


def _matrix_of(d) -> tuple:
    return d.matrix if isinstance(d, Derivation) else la.mat(d)


def eigen_decomposition(d) -> EigenDecomposition:
    m = _matrix_of(d)
    n = len(m)
    roots = rational_roots(char_poly(m))
    spaces = []
    for lam, k in roots:
        ker = la.nullspace(la.mat_pow(la.shift(m, lam), k), n)
        spaces.append(Subspace.span(n, ker))
        if spaces[-1].dim != k:
            raise HeintzeError("internal: generalized eigenspace dimension mismatch")
    return EigenDecomposition(
        tuple(r for r, _ in roots), tuple(spaces), tuple(k for _, k in roots)
    )


@dataclass(frozen=True)
class JordanChain:
    """``vectors[0]`` is the eigenvector; ``alpha(v_k) = lam v_k + v_{k-1}``."""

    eigenvalue: Fraction
    vectors: tuple

    @property
    def size(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class JordanData:
    blocks: tuple
    chains: tuple = field(default=(), compare=False)

    @property
    def eigenvalues(self) -> tuple:
        return tuple(lam for lam, _ in self.blocks)

    def sizes(self, lam) -> tuple:
        return dict(self.blocks)[lam]

    def max_block(self, lam) -> int:
        return max(self.sizes(lam))

    def basis_matrix(self) -> tuple:
        return la.from_columns([v for c in self.chains for v in c.vectors])

    def jordan_matrix(self) -> tuple:
        n = sum(c.size for c in self.chains)
        rows = [[Fraction(0)] * n for _ in range(n)]
        pos = 0
        for c in self.chains:
            for k in range(c.size):
                rows[pos + k][pos + k] = c.eigenvalue
                if k:
                    rows[pos + k - 1][pos + k] = Fraction(1)
            pos += c.size
        return tuple(tuple(r) for r in rows)

    def scaled(self, s) -> "JordanData":
        s = la.to_fraction(s)
        blocks = tuple((lam * s, sizes) for lam, sizes in self.blocks)
        chains = tuple(
            JordanChain(c.eigenvalue * s, tuple(la.scale(s ** -k, v) for k, v in enumerate(c.vectors)))
            for c in self.chains
        )
        return JordanData(blocks, chains)

    def to_dict(self) -> dict:
        return {la.format_fraction(lam): list(sizes) for lam, sizes in self.blocks}


def block_sizes_from_ranks(m, lam, mult: int) -> tuple:
    """Jordan block sizes at ``lam`` from the rank sequence of ``(m - lam)^k``."""
    n = len(m)
    shifted = la.shift(la.mat(m), lam)
    ranks = [n]
    power = la.identity(n)
    for _ in range(mult + 1):
        power = la.matmul(power, shifted)
        ranks.append(la.rank(power))
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, mult + 2)]
    sizes = []
    for k in range(1, mult + 1):
        exact = at_least[k - 1] - at_least[k]
        sizes.extend([k] * exact)
    return tuple(sorted(sizes, reverse=True))


def jordan_data(d) -> JordanData:
    m = _matrix_of(d)
    n = len(m)
    blocks = []
    chains = []
    for lam, mult in rational_roots(char_poly(m)):
        nil = la.shift(m, lam)
        kernels = [Subspace.zero(n)]
        power = la.identity(n)
        while kernels[-1].dim < mult:
            power = la.matmul(power, nil)
            kernels.append(Subspace.span(n, la.nullspace(power, n)))
        top = len(kernels) - 1
        tops = []
        for k in range(top, 0, -1):
            covered = list(kernels[k - 1].basis)
            for v, s in tops:
                w = v
                for _ in range(s - k):
                    w = la.matvec(nil, w)
                covered.append(w)
            span = Subspace.span(n, covered)
            for b in kernels[k].basis:
                if not span.contains(b):
                    tops.append((b, k))
                    span = span + Subspace.span(n, [b])
        lam_chains = []
        for v, s in tops:
            vecs = [v]
            for _ in range(s - 1):
                vecs.append(la.matvec(nil, vecs[-1]))
            lam_chains.append(JordanChain(lam, tuple(reversed(vecs))))
        lam_chains.sort(key=lambda c: -c.size)
        sizes = tuple(c.size for c in lam_chains)
        if sizes != block_sizes_from_ranks(m, lam, mult):
            raise HeintzeError("internal: Jordan chains disagree with the rank sequence")
        blocks.append((lam, sizes))
        chains.extend(lam_chains)
    jd = JordanData(tuple(blocks), tuple(chains))
    p = jd.basis_matrix()
    if la.rank(p) != n or la.matmul(m, p) != la.matmul(p, jd.jordan_matrix()):
        raise HeintzeError("internal: Jordan basis fails the conjugation check")
    return jd


@dataclass(frozen=True)
class SemisimpleNilpotentSplit:
    delta: Derivation
    nu: Derivation


def semisimple_nilpotent_split(d: Derivation) -> SemisimpleNilpotentSplit:
    eig = eigen_decomposition(d)
    n = d.dim
    delta = la.zero_matrix(n)
    for lam, proj in zip(eig.eigenvalues, eig.projections()):
        delta = la.mat_add(delta, la.mat_scale(lam, proj))
    nu = la.mat_sub(d.matrix, delta)
    return SemisimpleNilpotentSplit(
        validate_derivation(d.algebra, delta), validate_derivation(d.algebra, nu)
    )


@dataclass
class AuditReport:
    passed: bool
    checked: int
    violations: list

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "violations": self.violations}


def grading_check(d: Derivation, e: EigenDecomposition | None = None) -> AuditReport:
    """Verify ``[V_i, V_j]`` lies in the ``lam_i + lam_j`` space, or vanishes."""
    e = e or eigen_decomposition(d)
    a = d.algebra
    lookup = dict(zip(e.eigenvalues, e.spaces))
    bad = []
    checked = 0
    for i, (li, vi) in enumerate(zip(e.eigenvalues, e.spaces)):
        for j in range(i, len(e.eigenvalues)):
            lj, vj = e.eigenvalues[j], e.spaces[j]
            target = lookup.get(li + lj)
            for x in vi.basis:
                for y in vj.basis:
                    checked += 1
                    w = bracket(a, x, y)
                    ok = la.is_zero(w) if target is None else target.contains(w)
                    if not ok:
                        bad.append({"eigenvalues": [str(li), str(lj)], "bracket": [str(c) for c in w]})
    return AuditReport(not bad, checked, bad)


def is_class_c(a: NilpotentLieAlgebra) -> bool:
    return (a.nilpotency_class or 1) <= 2 and derived_subalgebra(a).dim <= 1


def jordan_basis_bracket_audit(d: Derivation, basis: JordanData | None = None) -> AuditReport:
    """Check chain relations and the bracket constraints on Jordan chains in class C.

    A nonzero ``[X_r^1, X_s^l]`` is only allowed at the top ``l = m_s``, and
    then ``m_r >= m_s`` forces ``m_r = m_s``.
    """
    a = d.algebra
    if not is_class_c(a):
        raise NotClassC("algebra is not 2-step with derived algebra of dimension <= 1")
    basis = basis or jordan_data(d)
    bad = []
    checked = 0
    vectors = [v for c in basis.chains for v in c.vectors]
    if len(vectors) != a.dim or la.rank(vectors) != a.dim:
        bad.append({"kind": "basis", "detail": "chain vectors do not form a basis"})
    for r, c in enumerate(basis.chains):
        for k, v in enumerate(c.vectors):
            checked += 1
            expected = la.scale(c.eigenvalue, v)
            if k:
                expected = la.add(expected, c.vectors[k - 1])
            if d.apply(v) != expected:
                bad.append({"kind": "chain", "chain": r, "position": k + 1})
    for r, cr in enumerate(basis.chains):
        x1 = cr.vectors[0]
        for s, cs in enumerate(basis.chains):
            for l, y in enumerate(cs.vectors, start=1):
                checked += 1
                if la.is_zero(bracket(a, x1, y)):
                    continue
                if l != cs.size:
                    bad.append({"kind": "top-only", "chains": [r, s], "position": l})
                elif cr.size >= cs.size and cr.size != cs.size:
                    bad.append({"kind": "equal-size", "chains": [r, s], "sizes": [cr.size, cs.size]})
    return AuditReport(not bad, checked, bad)
