"""Exact linear algebra over the rationals.

Vectors are tuples of ``Fraction``; matrices are tuples of row tuples.
A matrix acts on column vectors, so column ``j`` of a derivation matrix
holds the coordinates of the image of the ``j``-th basis vector.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not an exact rational: {value!r}")
        out = Fraction(value.replace(" ", ""))
        return out
    raise TypeError(f"not an exact rational: {value!r} ({type(value).__name__})")


def vec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(rows: int, cols: int | None = None) -> Matrix:
    return tuple(zeros(rows if cols is None else cols) for _ in range(rows))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), ZERO)


def combination(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_add(a, b) -> Matrix:
    return tuple(add(r, s) for r, s in zip(a, b))


def mat_sub(a, b) -> Matrix:
    return tuple(sub(r, s) for r, s in zip(a, b))


def mat_scale(c, a) -> Matrix:
    return tuple(scale(c, r) for r in a)


def shift(a, lam) -> Matrix:
    """Return ``a - lam * I``."""
    return tuple(
        tuple(x - lam if i == j else x for j, x in enumerate(row)) for i, row in enumerate(a)
    )


def mat_pow(a, k: int) -> Matrix:
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def trace(a):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(cols)


def columns(a) -> list:
    return [tuple(c) for c in transpose(a)]


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(nonzero_rows, pivots)`` with the zero rows dropped.
    """
    work = [list(r) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        p = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        piv = work[r][c]
        if piv != 1:
            work[r] = [x / piv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(a: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{v : a v = 0}`` (one vector per free column)."""
    red, pivots = rref(a, ncols) if a else ((), ())
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + list(unit(n, i)) for i, row in enumerate(a)]
    red, pivots = rref(aug, n)
    if pivots != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def solve(a: Sequence[Sequence], b: Sequence):
    """One solution of ``a x = b`` or ``None`` if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
