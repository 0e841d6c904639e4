"""A commutative braided logVA instance over differential polynomials.

V = Q(i)[x, x', x'', ...] with vacuum 1, zero braiding, translation d, and

    mu_{-1-j}(f (x) g) = (d^j f / j!) * g,      mu_{n}(f (x) g) = 0 for n >= 0,

the Y(f, z)g = (e^{zd}f) g structure of a commutative vertex algebra.  Basis
keys are differential monomials graded by degree(x^(k)) = k + 1; every charge
is zero, so all braiding eigenvalues vanish.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional

from . import engine
from .diffpoly import DiffPoly, PMono
from .scalars import DualScalar, ZERO, dual, from_gauss
from .states import State, add_into, unit


def _mono_degree(mono: PMono) -> int:
    return sum(n + 1 for _g, n in mono)


def _state_to_poly(s: State) -> DiffPoly:
    out = DiffPoly.zero()
    for mono, c in s.items():
        if not c.eps.is_zero():
            raise ValueError("commutative instance is eps-free")
        out = out + DiffPoly({mono: c.value})
    return out


def _poly_to_state(p: DiffPoly) -> State:
    return {mono: from_gauss(c) for mono, c in p.terms.items()}


class CommutativeInstance(engine.LogVAInstance):
    name = "commutative"
    dual_ring = False

    @property
    def vacuum_key(self) -> Hashable:
        return ()

    def basis(self, degree: int, charge: Optional[int] = None) -> List[PMono]:
        if charge not in (None, 0):
            return []
        out: List[PMono] = []

        def rec(prefix, rem, min_order):
            if rem == 0:
                out.append(tuple(prefix))
                return
            for n in range(min_order, rem):
                prefix.append(("x", n))
                rec(prefix, rem - n - 1, n)
                prefix.pop()

        rec([], degree, 0)
        return sorted(out)

    def degree_of(self, key: PMono) -> int:
        return _mono_degree(key)

    def charge_of(self, key: PMono) -> int:
        return 0

    def generator_states(self) -> Dict[str, State]:
        return {"x": unit((("x", 0),))}

    def braiding_scalar(self, qa: int, qb: int) -> DualScalar:
        return ZERO

    def translate_state(self, a: State) -> State:
        return _poly_to_state(_state_to_poly(a).d())

    def mu(self, a: State, n: int, b: State) -> State:
        if n >= 0:
            return {}
        j = -n - 1
        fa = _state_to_poly(a).d(j)
        fact = 1
        for t in range(2, j + 1):
            fact *= t
        from fractions import Fraction

        from .scalars import gauss

        prod = fa.scaled(gauss(Fraction(1, fact))) * _state_to_poly(b)
        return _poly_to_state(prod)


def commutative_instance() -> CommutativeInstance:
    return CommutativeInstance()
