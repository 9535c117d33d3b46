"""Nilpotent Lie algebras presented by rational structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    HeintzeError,
    JacobiViolation,
    NotAnIdeal,
    NotASubalgebra,
    NotNilpotent,
)
from .subspace import Subspace


@dataclass(frozen=True, eq=False)
class NilpotentLieAlgebra:
    """Structure constants ``structure[i][j][k]``: ``[e_i, e_j] = sum_k c_ijk e_k``.

    Build through :func:`validate_algebra`; the raw constructor does no
    checking and exists for code that must inspect broken input.
    """

    dim: int
    structure: tuple
    labels: tuple = ()
    nilpotency_class: int | None = None
    _terms: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))
        terms = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                row = self.structure[i][j]
                nz = tuple((k, c) for k, c in enumerate(row) if c)
                if nz:
                    terms.append((i, j, nz))
        object.__setattr__(self, "_terms", tuple(terms))

    def __eq__(self, other):
        return isinstance(other, NilpotentLieAlgebra) and self.structure == other.structure

    def __hash__(self):
        return hash(self.structure)

    def basis_vector(self, i: int) -> tuple:
        return la.unit(self.dim, i)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        return bracket(self, x, y)

    def is_abelian(self) -> bool:
        return not self._terms

    def full(self) -> Subspace:
        return Subspace.full(self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.dim)


def _structure_from(raw) -> tuple:
    n = len(raw)
    out = []
    for i in range(n):
        if len(raw[i]) != n:
            raise DimensionMismatch("structure tensor must be n x n x n")
        row = []
        for j in range(n):
            if len(raw[i][j]) != n:
                raise DimensionMismatch("structure tensor must be n x n x n")
            row.append(la.vec(raw[i][j]))
        out.append(tuple(row))
    return tuple(out)


def structure_from_brackets(n: int, triples) -> tuple:
    """Dense tensor from ``(i, j, k, value)`` entries (0-based), completed antisymmetrically.

    An entry given for both ``(i, j)`` and ``(j, i)`` is kept as given, so
    inconsistent input survives until validation rejects it.
    """
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    given = set()
    for i, j, k, v in triples:
        for idx in (i, j, k):
            if not 0 <= idx < n:
                raise DimensionMismatch(f"index {idx + 1} out of range 1..{n}")
        c[i][j][k] = la.to_fraction(v)
        given.add((i, j, k))
    for i, j, k in list(given):
        if (j, i, k) not in given and i != j:
            c[j][i][k] = -c[i][j][k]
    return tuple(tuple(tuple(r) for r in mid) for mid in c)


def antisymmetry_violations(structure) -> list:
    n = len(structure)
    bad = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if structure[i][j][k] != -structure[j][i][k]:
                    bad.append((i, j, k))
    return bad


def jacobi_violations(a: NilpotentLieAlgebra, first_only: bool = False) -> list:
    bad = []
    e = [a.basis_vector(i) for i in range(a.dim)]
    brackets = {}

    def br(i, j):
        if (i, j) not in brackets:
            brackets[(i, j)] = tuple(a.structure[i][j])
        return brackets[(i, j)]

    for i, j, k in combinations(range(a.dim), 3):
        total = la.add(
            la.add(bracket(a, e[i], br(j, k)), bracket(a, e[j], br(k, i))),
            bracket(a, e[k], br(i, j)),
        )
        if not la.is_zero(total):
            bad.append((i, j, k))
            if first_only:
                break
    return bad


def validate_algebra(structure, labels: Sequence[str] | None = None) -> NilpotentLieAlgebra:
    """Check antisymmetry, Jacobi and nilpotency; compute the nilpotency class."""
    struct = _structure_from(structure)
    n = len(struct)
    if n == 0:
        raise DimensionMismatch("algebra dimension must be positive")
    if labels is not None and len(labels) != n:
        raise DimensionMismatch("one label per basis vector required")
    bad = antisymmetry_violations(struct)
    if bad:
        raise AntisymmetryViolation(*bad[0])
    a = NilpotentLieAlgebra(n, struct, tuple(labels or ()))
    bad = jacobi_violations(a, first_only=True)
    if bad:
        raise JacobiViolation(*bad[0])
    series = _lower_central(a)
    if not series[-1].is_zero():
        raise NotNilpotent()
    object.__setattr__(a, "nilpotency_class", max(len(series) - 1, 1))
    return a


def bracket(a: NilpotentLieAlgebra, x: Sequence, y: Sequence) -> tuple:
    n = a.dim
    if len(x) != n or len(y) != n:
        raise DimensionMismatch(f"expected vectors of length {n}")
    out = [Fraction(0)] * n
    for i, j, nz in a._terms:
        w = x[i] * y[j] - x[j] * y[i]
        if w:
            for k, c in nz:
                out[k] += w * c
    return tuple(out)


def ad_matrix(a: NilpotentLieAlgebra, x: Sequence) -> tuple:
    """Matrix of ``ad_x`` (columns are ``[x, e_j]``)."""
    cols = [bracket(a, x, a.basis_vector(j)) for j in range(a.dim)]
    return la.from_columns(cols)


def bracket_spaces(a: NilpotentLieAlgebra, u: Subspace, v: Subspace) -> Subspace:
    return Subspace.span(a.dim, [bracket(a, x, y) for x in u.basis for y in v.basis])


def is_subalgebra(a: NilpotentLieAlgebra, h: Subspace) -> bool:
    return all(h.contains(bracket(a, x, y)) for x, y in combinations(h.basis, 2))


def is_ideal(a: NilpotentLieAlgebra, k: Subspace) -> bool:
    return all(
        k.contains(bracket(a, a.basis_vector(i), y)) for i in range(a.dim) for y in k.basis
    )


def lie_span(a: NilpotentLieAlgebra, generators) -> Subspace:
    """Smallest subalgebra containing ``generators``."""
    current = Subspace.span(a.dim, list(generators))
    while True:
        new = Subspace.span(
            a.dim,
            list(current.basis) + [bracket(a, x, y) for x, y in combinations(current.basis, 2)],
        )
        if new.dim == current.dim:
            return current
        current = new


def center(a: NilpotentLieAlgebra) -> Subspace:
    # rows: coefficient of e_k in [x, e_j] as a linear form in x
    rows = []
    for j in range(a.dim):
        for k in range(a.dim):
            rows.append(tuple(a.structure[i][j][k] for i in range(a.dim)))
    return Subspace.span(a.dim, la.nullspace(rows, a.dim))


def derived_subalgebra(a: NilpotentLieAlgebra) -> Subspace:
    return Subspace.span(a.dim, [tuple(a.structure[i][j]) for i, j in combinations(range(a.dim), 2)])


def _lower_central(a: NilpotentLieAlgebra) -> list:
    series = [a.full()]
    while not series[-1].is_zero():
        nxt = bracket_spaces(a, a.full(), series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def lower_central_series(a: NilpotentLieAlgebra) -> list:
    """``[a, [a,a], [a,[a,a]], ..., 0]``, strictly decreasing."""
    series = _lower_central(a)
    if not series[-1].is_zero():
        raise NotNilpotent()
    return series


def normalizer(a: NilpotentLieAlgebra, h: Subspace) -> Subspace:
    """``{X : [X, h] in h}``; ``h`` must be a subalgebra."""
    if h.ambient_dim != a.dim:
        raise DimensionMismatch("subspace lives in a different ambient space")
    if not is_subalgebra(a, h):
        raise NotASubalgebra("normalizer requires a subalgebra")
    rows = []
    ann = h.annihilator()
    for y in h.basis:
        # x -> [x, y] has matrix -ad_y
        m = ad_matrix(a, y)
        for f in ann:
            rows.append(tuple(-sum(f[k] * m[k][i] for k in range(a.dim)) for i in range(a.dim)))
    if not rows:
        return a.full()
    return Subspace.span(a.dim, la.nullspace(rows, a.dim))


def normalizer_chain(a: NilpotentLieAlgebra, h: Subspace) -> list:
    """``[h, N(h), N(N(h)), ..., a]``; the chain length is ``len(result) - 1``."""
    chain = [h]
    if not is_subalgebra(a, h):
        raise NotASubalgebra("normalizer chain requires a subalgebra")
    while not chain[-1].is_full():
        nxt = normalizer(a, chain[-1])
        if nxt.dim <= chain[-1].dim:
            raise NotNilpotent("normalizer of a proper subalgebra failed to grow")
        chain.append(nxt)
    return chain


@dataclass(frozen=True)
class QuotientPresentation:
    algebra: NilpotentLieAlgebra
    projection: tuple
    section: tuple
    kernel: Subspace

    def project(self, v: Sequence) -> tuple:
        return la.matvec(self.projection, v)

    def lift(self, w: Sequence) -> tuple:
        return la.matvec(self.section, w)

    def induced(self, m) -> tuple:
        """Matrix of the map induced on the quotient by an endomorphism preserving the kernel."""
        return la.matmul(la.matmul(self.projection, m), self.section)


def quotient(a: NilpotentLieAlgebra, k: Subspace) -> QuotientPresentation:
    if not is_ideal(a, k):
        raise NotAnIdeal("quotient requires an ideal")
    comp = k.complement_indices()
    q = len(comp)
    section = la.from_columns([a.basis_vector(c) for c in comp]) if q else tuple(() for _ in range(a.dim))
    proj_cols = [tuple(k.reduce(a.basis_vector(j))[c] for c in comp) for j in range(a.dim)]
    projection = la.from_columns(proj_cols) if q else ()
    struct = [[tuple(k.reduce(a.structure[ci][cj])[c] for c in comp) for cj in comp] for ci in comp]
    labels = tuple(a.labels[c] for c in comp)
    if q == 0:
        qa = NilpotentLieAlgebra(0, (), (), 0)
        return QuotientPresentation(qa, projection, section, k)
    qa = validate_algebra(struct, labels)
    pres = QuotientPresentation(qa, projection, section, k)
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            lhs = pres.project(a.structure[i][j])
            rhs = bracket(qa, pres.project(a.basis_vector(i)), pres.project(a.basis_vector(j)))
            if lhs != rhs:
                raise HeintzeError("internal: projection is not a Lie morphism")
    return pres


@dataclass(frozen=True)
class SubalgebraPresentation:
    """A subalgebra as an algebra in its own right, with the inclusion map."""

    algebra: NilpotentLieAlgebra
    inclusion: tuple
    space: Subspace

    def restrict(self, m) -> tuple:
        """Matrix of ``m`` restricted to an invariant subspace, in the echelon basis."""
        cols = []
        for b in self.space.basis:
            coords = self.space.coordinates(la.matvec(m, b))
            if coords is None:
                raise HeintzeError("subspace is not invariant under the map")
            cols.append(coords)
        return la.from_columns(cols)


def subalgebra(a: NilpotentLieAlgebra, h: Subspace) -> SubalgebraPresentation:
    if not is_subalgebra(a, h):
        raise NotASubalgebra("not closed under the bracket")
    basis = h.basis
    struct = [[h.coordinates(bracket(a, x, y)) for y in basis] for x in basis]
    sub = validate_algebra(struct, tuple(f"h{i + 1}" for i in range(h.dim)))
    return SubalgebraPresentation(sub, la.from_columns(basis), h)


def change_basis(a: NilpotentLieAlgebra, p) -> NilpotentLieAlgebra:
    """Structure constants in the basis given by the columns of invertible ``p``."""
    pinv = la.inverse(p)
    cols = la.columns(p)
    n = a.dim
    struct = [[la.matvec(pinv, bracket(a, cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return validate_algebra(struct)
