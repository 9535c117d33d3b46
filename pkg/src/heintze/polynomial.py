"""Univariate polynomials with rational coefficients."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import linalg as la


def _trim(coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree; the zero polynomial has no coefficients."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(la.vec(self.coeffs)))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-la.to_fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(la.add(a, b))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(c * la.to_fraction(other) for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial((1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        for shift in range(len(q) - 1, -1, -1):
            c = rem[shift + other.degree] / lead
            q[shift] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return Polynomial(q), Polynomial(rem[: other.degree] if other.degree > 0 else ())

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        return self * (1 / self.leading) if self.coeffs else self

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def scaled_argument(self, s) -> "Polynomial":
        """Characteristic-polynomial rescaling: roots multiplied by ``s`` and kept monic."""
        s = la.to_fraction(s)
        d = self.degree
        return Polynomial(tuple(c * s ** (d - i) for i, c in enumerate(self.coeffs)))

    def integer_primitive(self) -> tuple:
        """Integer coefficients of a primitive multiple with positive leading term."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        ints = [x // g for x in ints] if g else ints
        if ints and ints[-1] < 0:
            ints = [-x for x in ints]
        return tuple(ints)

    def to_strings(self) -> list:
        return [la.format_fraction(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            coef = "" if (mag == 1 and i > 0) else la.format_fraction(mag)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append((sign, coef + ("*" if coef and mono else "") + mono))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def factored_string(roots_with_mult) -> str:
    parts = []
    for r, m in roots_with_mult:
        if r == 0:
            base = "x"
        elif r > 0:
            base = f"(x-{la.format_fraction(r)})"
        else:
            base = f"(x+{la.format_fraction(-r)})"
        parts.append(base if m == 1 else f"{base}^{m}")
    return "".join(parts) if parts else "1"
