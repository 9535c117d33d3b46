"""Rational subspaces in canonical (reduced row echelon) form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg as la
from .errors import DimensionMismatch


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n; ``basis`` rows are in reduced row echelon form.

    Because the echelon form is canonical, two subspaces are equal exactly
    when their dataclass fields are equal.
    """

    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            rows.append(la.vec(v))
        red, _ = la.rref(rows, ambient_dim) if rows else ((), ())
        return cls(ambient_dim, red)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, la.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return tuple(next(c for c, x in enumerate(row) if x != 0) for row in self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def is_zero(self) -> bool:
        return self.dim == 0

    def coordinates(self, v: Sequence):
        """Coordinates of ``v`` in ``basis``, or ``None`` if ``v`` is outside."""
        coords = tuple(v[p] for p in self.pivots)
        if la.combination(coords, self.basis, self.ambient_dim) != tuple(v):
            return None
        return coords

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        return self.coordinates(la.vec(v)) is not None

    __contains__ = contains

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        # a.u - b.w = 0 over the stacked basis
        cols = list(self.basis) + [la.scale(-1, w) for w in other.basis]
        kernel = la.nullspace(la.transpose(cols), len(cols))
        vecs = [la.combination(k[: self.dim], self.basis, self.ambient_dim) for k in kernel]
        return Subspace.span(self.ambient_dim, vecs)

    __and__ = intersection

    def reduce(self, v: Sequence) -> tuple:
        """Canonical representative of ``v`` modulo this subspace (zeros on pivots)."""
        out = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if c:
                out = [x - c * y for x, y in zip(out, row)]
        return tuple(out)

    def complement_indices(self) -> tuple:
        """Coordinate indices spanning a complement (the non-pivot columns)."""
        piv = set(self.pivots)
        return tuple(c for c in range(self.ambient_dim) if c not in piv)

    def annihilator(self) -> list:
        """Linear functionals (as vectors) vanishing on this subspace."""
        return la.nullspace(self.basis, self.ambient_dim)

    def image(self, m) -> "Subspace":
        return Subspace.span(self.ambient_dim, [la.matvec(m, b) for b in self.basis])

    def is_invariant(self, m) -> bool:
        return all(self.contains(la.matvec(m, b)) for b in self.basis)

    def __repr__(self) -> str:
        rows = ", ".join("(" + ",".join(la.format_fraction(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, [{rows}])"
