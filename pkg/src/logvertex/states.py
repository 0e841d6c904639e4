"""Sparse linear combinations over the dual scalar ring.

A *state* is a dict mapping hashable basis keys to nonzero
:class:`~logvertex.scalars.DualScalar` coefficients.  All helpers are pure;
states are treated as immutable values and never mutated in place by callers.
Tensors (elements of V (x) V) use pair keys with the same conventions.
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, Tuple

from .scalars import DualScalar, ONE, scalar_to_json

State = Dict[Hashable, DualScalar]


def zero() -> State:
    return {}

def unit(key, coeff: DualScalar = ONE) -> State:
    return {} if coeff.is_zero() else {key: coeff}

def add_into(acc: State, s: State, coeff: DualScalar = ONE) -> None:
    """acc += coeff * s (the one sanctioned in-place accumulator)."""
    if coeff.is_zero():
        return
    for k, c in s.items():
        new = acc.get(k)
        new = c * coeff if new is None else new + c * coeff
        if new.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = new

def add(a: State, b: State) -> State:
    out = dict(a)
    add_into(out, b)
    return out

def sub(a: State, b: State) -> State:
    out = dict(a)
    for k, c in b.items():
        new = out.get(k)
        new = -c if new is None else new - c
        if new.is_zero():
            out.pop(k, None)
        else:
            out[k] = new
    return out

def scale(coeff: DualScalar, s: State) -> State:
    out: State = {}
    add_into(out, s, coeff)
    return out

def is_zero(s: State) -> bool:
    return not s

def eps_part(s: State) -> State:
    """The states' eps coefficients, re-read as value coefficients."""
    from .scalars import DualScalar as D, GAUSS_ZERO

    out: State = {}
    for k, c in s.items():
        if not c.eps.is_zero():
            out[k] = D(c.eps, GAUSS_ZERO)
    return out

def value_part(s: State) -> State:
    from .scalars import DualScalar as D, GAUSS_ZERO

    out: State = {}
    for k, c in s.items():
        if not c.value.is_zero():
            out[k] = D(c.value, GAUSS_ZERO)
    return out

def tensor(a: State, b: State) -> State:
    out: State = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            c = ca * cb
            if not c.is_zero():
                out[(ka, kb)] = c
    return out

def state_to_json(s: State, key_str=str) -> list:
    return [[key_str(k), scalar_to_json(c)] for k, c in sorted(s.items(), key=lambda kv: key_str(kv[0]))]
