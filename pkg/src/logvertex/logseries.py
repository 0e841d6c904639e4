"""Formal calculus in z and zeta = log z.

A :class:`LogSeries` is a finite sum  sum c_{alpha,j} z^alpha zeta^j  with
exponents alpha in Q + Qi and zeta-powers j >= 0.  Exponents within one coset
alpha + Z are lower-truncated: the series may declare, per coset, a floor below
which all coefficients are known to vanish.  Coefficients live in an arbitrary
exact module; the scalar case uses :class:`~logvertex.scalars.DualScalar` and
state-valued series use sparse dicts (see :mod:`logvertex.states`).

The total derivative

    D_z = d/dz + z^{-1} d/dzeta

treats zeta as log z:  D_z(z^alpha zeta^j) = alpha z^{alpha-1} zeta^j
+ j z^{alpha-1} zeta^{j-1}.

``iota_expand`` produces the two directed expansions of (z1 - z2)^{n+S} on a
spectral component where S acts with semisimple eigenvalue d and a scalar
nilpotent part (the eps-part of the dual eigenvalue):

    iota_{z1,z2}: sum_j binom(n+S, j) (-1)^j       z1^{n-j+S} z2^j
    iota_{z2,z1}: sum_j binom(n+S, j) (-1)^{n+j+d} z1^j       z2^{n-j+S}

with z_i^S = z_i^d e^{zeta_i * (nilpotent part)}; the binomial of the full dual
eigenvalue carries the derivative corrections exactly.  The second direction
needs an integer d for the sign and raises Unsupported otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from . import states
from .errors import Unsupported
from .scalars import (
    DualScalar,
    GAUSS_ZERO,
    GaussScalar,
    MINUS_ONE,
    ONE,
    ZERO,
    binomial,
    dual,
    from_gauss,
    gauss,
    minus_one_pow,
    scalar_to_json,
)

Exponent = GaussScalar

ZDIR_12 = "z1-then-z2"
ZDIR_21 = "z2-then-z1"


def coset_key(alpha: Exponent) -> Tuple[Fraction, Fraction]:
    """Key identifying the coset alpha + Z (fractional real part, imag part)."""
    return (alpha.re - alpha.re.__floor__(), alpha.im)


def _is_scalar(c) -> bool:
    return isinstance(c, DualScalar)


def _czero(c) -> bool:
    return c.is_zero() if _is_scalar(c) else states.is_zero(c)


def _cadd(a, b):
    return a + b if _is_scalar(a) else states.add(a, b)


def _cscale(coeff: DualScalar, c):
    return coeff * c if _is_scalar(c) else states.scale(coeff, c)


class LogSeries:
    """Finite formal sum over (exponent, zeta-power) term keys.

    ``terms`` maps (alpha: GaussScalar, j: int >= 0) to a nonzero coefficient.
    ``floors`` optionally records, per coset key, a minimal exponent real part
    guaranteeing lower truncation.
    """

    __slots__ = ("terms", "floors")

    def __init__(self, terms: Optional[Dict] = None, floors: Optional[Dict] = None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if not _czero(c):
                    alpha, j = key
                    if j < 0:
                        raise ValueError("zeta-power must be >= 0")
                    self.terms[key] = c
        self.floors = dict(floors) if floors else {}

    def copy(self) -> "LogSeries":
        return LogSeries(dict(self.terms), dict(self.floors))

    def add_term(self, alpha: Exponent, j: int, c) -> None:
        key = (alpha, j)
        old = self.terms.get(key)
        new = c if old is None else _cadd(old, c)
        if _czero(new):
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other: "LogSeries") -> "LogSeries":
        out = self.copy()
        for (alpha, j), c in other.terms.items():
            out.add_term(alpha, j, c)
        out.floors = _merge_floors(self.floors, other.floors)
        return out

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        out = self.copy()
        for (alpha, j), c in other.terms.items():
            out.add_term(alpha, j, _cscale(MINUS_ONE, c))
        out.floors = _merge_floors(self.floors, other.floors)
        return out

    def scaled(self, coeff: DualScalar) -> "LogSeries":
        out = LogSeries(floors=self.floors)
        for (alpha, j), c in self.terms.items():
            out.add_term(alpha, j, _cscale(coeff, c))
        return out

    def __mul__(self, other: "LogSeries") -> "LogSeries":
        """Cauchy product; defined when coefficients multiply (scalar case)."""
        out = LogSeries()
        for (a1, j1), c1 in self.terms.items():
            for (a2, j2), c2 in other.terms.items():
                out.add_term(a1 + a2, j1 + j2, c1 * c2)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, LogSeries) and self.terms == other.terms

    def coefficient(self, alpha: Exponent, j: int = 0):
        return self.terms.get((alpha, j))

    def cosets(self):
        seen = {}
        for (alpha, j) in self.terms:
            key = coset_key(alpha)
            cur = seen.get(key)
            if cur is None or alpha.re < cur:
                seen[key] = alpha.re
        return seen

    def check_floors(self) -> None:
        for (alpha, _j) in self.terms:
            floor = self.floors.get(coset_key(alpha))
            if floor is not None and alpha.re < floor:
                raise ValueError(f"exponent {alpha!r} below declared floor {floor}")

    # -- rendering -------------------------------------------------------

    def _sorted_keys(self):
        return sorted(self.terms, key=lambda key: (coset_key(key[0]), key[0].re, key[1]))

    def render(self, coeff_str: Callable = repr) -> str:
        """Textual grammar: `c * z^(a+bi) * zeta^j`, sorted deterministically."""
        if not self.terms:
            return "0"
        parts = []
        for (alpha, j) in self._sorted_keys():
            c = self.terms[(alpha, j)]
            piece = [coeff_str(c)]
            if not alpha.is_zero():
                piece.append(f"z^({alpha!r})")
            if j:
                piece.append(f"zeta^{j}")
            parts.append(" * ".join(piece))
        return " + ".join(parts)

    def to_json(self, coeff_json: Callable = scalar_to_json) -> list:
        return [
            {
                "exp": [str(alpha.re), str(alpha.im)],
                "zeta": j,
                "coeff": coeff_json(self.terms[(alpha, j)]),
            }
            for (alpha, j) in self._sorted_keys()
        ]


def _merge_floors(f1: Dict, f2: Dict) -> Dict:
    out = dict(f1)
    for key, val in f2.items():
        if key in out:
            out[key] = min(out[key], val)
        else:
            out[key] = val
    return out


def dz_total(s: LogSeries, k: int = 1) -> LogSeries:
    """k-th power of the total derivative D_z = d/dz + z^{-1} d/dzeta."""
    if k < 0:
        raise ValueError("k >= 0")
    cur = s
    for _ in range(k):
        out = LogSeries(floors={key: f - 1 for key, f in cur.floors.items()})
        for (alpha, j), c in cur.terms.items():
            if not alpha.is_zero():
                out.add_term(alpha - gauss(1), j, _cscale(from_gauss(alpha), c))
            if j:
                out.add_term(alpha - gauss(1), j - 1, _cscale(dual(j), c))
        cur = out
    return cur


@dataclass(frozen=True)
class IotaTerm:
    """One monomial coeff * z1^e1 * z2^e2 * zeta^p of a directed expansion.

    ``zeta_power`` counts the zeta-variable attached to the direction's
    principal variable (zeta_1 for z1-then-z2, zeta_2 for z2-then-z1).
    """

    j: int
    z1_exp: Exponent
    z2_exp: Exponent
    zeta_power: int
    coeff: DualScalar


@dataclass(frozen=True)
class IotaExpansion:
    direction: str
    n: int
    eigenvalue: DualScalar
    nilpotent_order: int
    truncation: int
    terms: Tuple[IotaTerm, ...] = field(default_factory=tuple)


def _nilpotent_part(d: DualScalar) -> DualScalar:
    return DualScalar(GAUSS_ZERO, d.eps)


def iota_expand(
    direction: str,
    n: int,
    d: DualScalar,
    nilpotent_order: int = 1,
    truncation: int = 0,
) -> IotaExpansion:
    """Directed expansion of z12^{n+S} on a spectral component.

    ``d`` is the dual eigenvalue of S on the component (value part = semisimple
    eigenvalue, eps part = scalar nilpotent action); terms are enumerated for
    j <= truncation.
    """
    if direction not in (ZDIR_12, ZDIR_21):
        raise ValueError(f"unknown direction {direction!r}")
    dval = d.value
    nil = _nilpotent_part(d)
    order = nilpotent_order if nil.is_zero() else max(nilpotent_order, 2)
    sign_21 = None
    if direction == ZDIR_21:
        sign_21 = minus_one_pow(dval + gauss(n))  # needs integer semisimple part
    terms = []
    for j in range(truncation + 1):
        base = binomial(dual(n) + d, j)
        if direction == ZDIR_12:
            base = base * (MINUS_ONE if j % 2 else ONE)
            e1, e2 = gauss(n - j) + dval, gauss(j)
        else:
            base = base * sign_21 * (MINUS_ONE if j % 2 else ONE)
            e1, e2 = gauss(j), gauss(n - j) + dval
        # e^{zeta * nil} on the principal variable, truncated by nilpotency
        power_coeff = base
        fact = 1
        for p in range(order):
            if p:
                fact *= p
                power_coeff = power_coeff * nil
            c = power_coeff * dual(Fraction(1, fact))
            if c.is_zero():
                break
            terms.append(IotaTerm(j=j, z1_exp=e1, z2_exp=e2, zeta_power=p, coeff=c))
    return IotaExpansion(
        direction=direction,
        n=n,
        eigenvalue=d,
        nilpotent_order=order,
        truncation=truncation,
        terms=tuple(terms),
    )


def delta_coeff(j: int, n: int, d: DualScalar) -> Tuple[Exponent, Exponent, DualScalar]:
    """n-th term data of (1/j!) D_{z2}^j delta_S(z1, z2) on a spectral component.

    Returns the exponent pair (-n-1-d, n-j+d) (semisimple parts) and the
    coefficient binom(n+d, j).
    """
    if j < 0:
        raise ValueError("j >= 0")
    coeff = binomial(dual(n) + d, j)
    e1 = gauss(-n - 1) - d.value
    e2 = gauss(n - j) + d.value
    return (e1, e2, coeff)
