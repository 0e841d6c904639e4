"""Exact coefficient arithmetic: Q(i) extended by a nilpotent eps (eps^2 = 0).

Every computation in this package runs over the commutative ring

    R = Q(i)[eps] / (eps^2),

represented by :class:`DualScalar` = value + eps * eps_part with both parts
:class:`GaussScalar` (Gaussian rationals re + i*im over ``fractions.Fraction``).
Units of R are exactly the elements with nonzero value part; dividing by a
non-unit raises :class:`~logvertex.errors.NonUnit`.

The generalized binomial coefficient ``binomial(c, j) = c(c-1)...(c-j+1)/j!``
accepts any dual scalar ``c``; with a nilpotent argument the product formula
automatically produces the first-derivative term, e.g.
``binomial(-eps, j) = eps*(-1)^j/j`` for j >= 1.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Union

from .errors import NonUnit, Unsupported

RationalLike = Union[int, Fraction]


class GaussScalar:
    """A Gaussian rational re + i*im with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussScalar is immutable")

    def __add__(self, other: "GaussScalar") -> "GaussScalar":
        return GaussScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussScalar") -> "GaussScalar":
        return GaussScalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussScalar":
        return GaussScalar(-self.re, -self.im)

    def __mul__(self, other: "GaussScalar") -> "GaussScalar":
        return GaussScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def inv(self) -> "GaussScalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(i)")
        return GaussScalar(self.re / n, -self.im / n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GaussScalar)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


class DualScalar:
    """An element value + eps*eps_part of Q(i)[eps]/(eps^2).

    Multiplication drops eps^2 terms: (a+eps b)(c+eps d) = ac + eps(ad+bc).
    """

    __slots__ = ("value", "eps")

    def __init__(self, value: GaussScalar, eps: GaussScalar):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name, value):
        raise AttributeError("DualScalar is immutable")

    def __add__(self, other: "DualScalar") -> "DualScalar":
        return DualScalar(self.value + other.value, self.eps + other.eps)

    def __sub__(self, other: "DualScalar") -> "DualScalar":
        return DualScalar(self.value - other.value, self.eps - other.eps)

    def __neg__(self) -> "DualScalar":
        return DualScalar(-self.value, -self.eps)

    def __mul__(self, other: "DualScalar") -> "DualScalar":
        return DualScalar(
            self.value * other.value,
            self.value * other.eps + self.eps * other.value,
        )

    def inv(self) -> "DualScalar":
        """(a + eps b)^-1 = a^-1 - eps b a^-2; requires a unit value part."""
        if self.value.is_zero():
            raise NonUnit(f"{self!r} has zero value part")
        vinv = self.value.inv()
        return DualScalar(vinv, -(self.eps * vinv * vinv))

    def __truediv__(self, other: "DualScalar") -> "DualScalar":
        return self * other.inv()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DualScalar)
            and self.value == other.value
            and self.eps == other.eps
        )

    def __hash__(self) -> int:
        return hash((self.value, self.eps))

    def is_zero(self) -> bool:
        return self.value.is_zero() and self.eps.is_zero()

    def __repr__(self) -> str:
        if self.eps.is_zero():
            return repr(self.value)
        if self.value.is_zero():
            return f"{self.eps!r}e"
        return f"({self.value!r}+{self.eps!r}e)"


def gauss(re: RationalLike = 0, im: RationalLike = 0) -> GaussScalar:
    return GaussScalar(re, im)


def dual(value: RationalLike = 0, eps: RationalLike = 0) -> DualScalar:
    """Build a dual scalar from rational (real) parts."""
    return DualScalar(GaussScalar(value), GaussScalar(eps))


def from_gauss(g: GaussScalar) -> DualScalar:
    return DualScalar(g, GAUSS_ZERO)


GAUSS_ZERO = GaussScalar(0)
GAUSS_ONE = GaussScalar(1)
GAUSS_I = GaussScalar(0, 1)
ZERO = DualScalar(GAUSS_ZERO, GAUSS_ZERO)
ONE = DualScalar(GAUSS_ONE, GAUSS_ZERO)
I = DualScalar(GAUSS_I, GAUSS_ZERO)
EPS = DualScalar(GAUSS_ZERO, GAUSS_ONE)
MINUS_ONE = DualScalar(GaussScalar(-1), GAUSS_ZERO)


def arith(op: str, x: DualScalar, y: DualScalar | None = None) -> DualScalar:
    """Uniform entry point for {add|mul|neg|inv} on dual scalars."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown op {op!r}")


def binomial(c: DualScalar, j: int) -> DualScalar:
    """Generalized binomial coefficient binom(c, j) = prod_{t<j}(c-t)/j!.

    Exact in the dual ring; binomial(c, 0) = 1.
    """
    if j < 0:
        raise ValueError("binomial needs j >= 0")
    result = ONE
    fact = 1
    for t in range(j):
        result = result * (c - dual(t))
        fact *= t + 1
    return result * dual(Fraction(1, fact))


def int_binomial(n: int, j: int) -> int:
    if j < 0:
        return 0
    num = 1
    for t in range(j):
        num = num * (n - t)
    for t in range(1, j + 1):
        num //= t  # exact: product of j consecutive integers
    return num


def minus_one_pow(d: GaussScalar) -> DualScalar:
    """(-1)^d for an integer semisimple eigenvalue d; Unsupported otherwise."""
    if not d.is_integer():
        raise Unsupported(f"(-1)^{d!r} with non-integer eigenvalue")
    return ONE if d.re.numerator % 2 == 0 else MINUS_ONE


# -- JSON encoding ------------------------------------------------------------
#
# {"re":[num,den],"im":[num,den],"eps_re":[num,den],"eps_im":[num,den]}
# with numerators/denominators as decimal strings (arbitrary precision).


def _frac_json(f: Fraction) -> list[str]:
    return [str(f.numerator), str(f.denominator)]


def _frac_from_json(pair) -> Fraction:
    return Fraction(int(pair[0]), int(pair[1]))


def scalar_to_json(x: DualScalar) -> dict:
    return {
        "re": _frac_json(x.value.re),
        "im": _frac_json(x.value.im),
        "eps_re": _frac_json(x.eps.re),
        "eps_im": _frac_json(x.eps.im),
    }


def scalar_from_json(data) -> DualScalar:
    if isinstance(data, str):
        data = json.loads(data)
    return DualScalar(
        GaussScalar(_frac_from_json(data["re"]), _frac_from_json(data["im"])),
        GaussScalar(_frac_from_json(data["eps_re"]), _frac_from_json(data["eps_im"])),
    )
