"""Group law of a simply connected nilpotent group in exponential coordinates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Sequence

import numpy as np

from . import linalg as la
from .algebra import NilpotentLieAlgebra, bracket
from .errors import ClassTooHigh, DimensionMismatch

BCH_MAX_DEPTH = 6


@lru_cache(maxsize=None)
def dynkin_table(depth: int = BCH_MAX_DEPTH) -> tuple:
    """Coefficients of right-nested bracket words in log(exp X exp Y).

    Words are tuples over {0: X, 1: Y}; the word ``w_1 ... w_m`` stands for
    ``ad_{w_1} ... ad_{w_{m-1}} w_m``.
    """
    coeff = {}

    def compositions(budget):
        # sequences of (r, s) pairs with r + s >= 1 and total <= budget
        if budget == 0:
            yield ()
            return
        yield ()
        for r in range(budget + 1):
            for s in range(budget + 1 - r):
                if r + s == 0:
                    continue
                for rest in compositions(budget - r - s):
                    yield ((r, s),) + rest

    for pairs in compositions(depth):
        if not pairs:
            continue
        n = len(pairs)
        total = sum(r + s for r, s in pairs)
        denom = total
        for r, s in pairs:
            denom *= factorial(r) * factorial(s)
        c = Fraction((-1) ** (n - 1), n * denom)
        word = ()
        for r, s in pairs:
            word += (0,) * r + (1,) * s
        coeff[word] = coeff.get(word, Fraction(0)) + c
    table = []
    for word, c in coeff.items():
        if c == 0:
            continue
        # words whose last two letters agree nest to zero
        if len(word) >= 2 and word[-1] == word[-2]:
            continue
        table.append((word, c))
    table.sort(key=lambda wc: (len(wc[0]), wc[0]))
    return tuple(table)


def _check_class(a: NilpotentLieAlgebra) -> int:
    c = a.nilpotency_class or 1
    if c > BCH_MAX_DEPTH:
        raise ClassTooHigh(f"nilpotency class {c} exceeds the BCH table depth {BCH_MAX_DEPTH}")
    return c


def bch_product(a: NilpotentLieAlgebra, x: Sequence, y: Sequence) -> tuple:
    """``Z`` with ``exp(x) exp(y) = exp(Z)``, exact (series truncated at the class)."""
    c = _check_class(a)
    x, y = la.vec(x), la.vec(y)
    if len(x) != a.dim or len(y) != a.dim:
        raise DimensionMismatch(f"expected vectors of length {a.dim}")
    letters = (x, y)
    cache = {}

    def nested(word):
        if word not in cache:
            if len(word) == 1:
                cache[word] = letters[word[0]]
            else:
                inner = nested(word[1:])
                cache[word] = inner if la.is_zero(inner) else bracket(a, letters[word[0]], inner)
        return cache[word]

    out = [Fraction(0)] * a.dim
    for word, coef in dynkin_table():
        if len(word) > c:
            break
        v = nested(word)
        for k, t in enumerate(v):
            if t:
                out[k] += coef * t
    return tuple(out)


def group_inverse(x: Sequence) -> tuple:
    return tuple(-t for t in x)


def conjugate(a: NilpotentLieAlgebra, x: Sequence, y: Sequence) -> tuple:
    """``sum_j ad_x^j(y) / j!`` (finite by nilpotency)."""
    x, y = la.vec(x), la.vec(y)
    out = list(y)
    term = y
    j = 0
    while True:
        j += 1
        term = bracket(a, x, term)
        if la.is_zero(term):
            return tuple(out)
        for k, t in enumerate(term):
            out[k] += t / factorial(j)


@dataclass(frozen=True)
class GroupElement:
    """``exp(coords)``; coordinates are exact tuples or float arrays."""

    coords: tuple

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(la.zeros(n))

    @property
    def exact(self) -> bool:
        return all(isinstance(t, Fraction) for t in self.coords)

    def as_array(self) -> np.ndarray:
        return np.array([float(t) for t in self.coords])


def structure_array(a: NilpotentLieAlgebra) -> np.ndarray:
    return np.array([[[float(c) for c in row] for row in mid] for mid in a.structure], dtype=float)


class NumericGroup:
    """Vectorised float version of the group law; rows of the inputs are points."""

    def __init__(self, a: NilpotentLieAlgebra):
        self.algebra = a
        self.depth = _check_class(a)
        self.structure = structure_array(a)
        self._pairs = [(i, j, self.structure[i, j]) for i in range(a.dim) for j in range(a.dim)
                       if np.any(self.structure[i, j])]
        self._table = [(w, float(c)) for w, c in dynkin_table() if len(w) <= self.depth]

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ad = np.tensordot(x, self.structure, axes=([-1], [0]))
        return np.einsum("...j,...jk->...k", y, ad)

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self._pairs:
            return x + y
        letters = (x, y)
        cache = {}

        def nested(word):
            if word not in cache:
                if len(word) == 1:
                    cache[word] = letters[word[0]]
                else:
                    cache[word] = self.bracket(letters[word[0]], nested(word[1:]))
            return cache[word]

        out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
        for word, coef in self._table:
            out = out + coef * nested(word)
        return out

    def difference(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``log(exp(x)^{-1} exp(y))``."""
        return self.product(-np.asarray(x, dtype=float), y)
