"""Differential polynomial algebras over Q(i).

A :class:`DiffPoly` is a polynomial in variables x_g^(n) (generator name g,
derivative order n >= 0) with GaussScalar coefficients.  Monomials are sorted
tuples of (generator, order) pairs with repetition; the total derivative d
sends x_g^(n) to x_g^(n+1) and extends as a derivation.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import GAUSS_ONE, GAUSS_ZERO, GaussScalar, gauss

Var = Tuple[str, int]
PMono = Tuple[Var, ...]


class DiffPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[PMono, GaussScalar]] = None):
        self.terms: Dict[PMono, GaussScalar] = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(sorted(mono))] = c

    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly()

    @staticmethod
    def one() -> "DiffPoly":
        return DiffPoly({(): GAUSS_ONE})

    @staticmethod
    def gen(name: str, order: int = 0, coeff: GaussScalar = GAUSS_ONE) -> "DiffPoly":
        return DiffPoly({((name, order),): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            new = out.get(mono, GAUSS_ZERO) + c
            if new.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = new
        return DiffPoly(out)

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + other.scaled(GaussScalar(-1))

    def __neg__(self) -> "DiffPoly":
        return self.scaled(GaussScalar(-1))

    def scaled(self, c: GaussScalar) -> "DiffPoly":
        if c.is_zero():
            return DiffPoly()
        return DiffPoly({m: cc * c for m, cc in self.terms.items()})

    def __mul__(self, other: "DiffPoly") -> "DiffPoly":
        out: Dict[PMono, GaussScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                c = c1 * c2
                new = out.get(mono, GAUSS_ZERO) + c
                if new.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = new
        return DiffPoly(out)

    def d(self, times: int = 1) -> "DiffPoly":
        """Total derivative: x_g^(n) -> x_g^(n+1), extended as a derivation."""
        cur = self
        for _ in range(times):
            out = DiffPoly()
            for mono, c in cur.terms.items():
                for idx, (g, n) in enumerate(mono):
                    lifted = mono[:idx] + ((g, n + 1),) + mono[idx + 1 :]
                    out = out + DiffPoly({tuple(sorted(lifted)): c})
            cur = out
        return cur

    def partial(self, var: Var) -> "DiffPoly":
        """Partial derivative with respect to one variable x_g^(n)."""
        out = DiffPoly()
        for mono, c in self.terms.items():
            count = mono.count(var)
            if count:
                reduced = list(mono)
                reduced.remove(var)
                out = out + DiffPoly({tuple(reduced): c * gauss(count)})
        return out

    def variables(self) -> List[Var]:
        seen = set()
        for mono in self.terms:
            seen.update(mono)
        return sorted(seen)

    def max_order(self) -> int:
        return max((n for mono in self.terms for _g, n in mono), default=0)

    def total_degree(self) -> int:
        return max((len(mono) for mono in self.terms), default=0)

    def substitute(self, images: Dict[str, Sequence[Tuple[GaussScalar, str]]]) -> "DiffPoly":
        """Linear change of generators g -> sum c_t * h_t, derivative-compatible."""
        out = DiffPoly()
        for mono, c in self.terms.items():
            term = DiffPoly({(): c})
            for g, n in mono:
                if g in images:
                    repl = DiffPoly()
                    for coeff, h in images[g]:
                        repl = repl + DiffPoly.gen(h, n, coeff)
                else:
                    repl = DiffPoly.gen(g, n)
                term = term * repl
            out = out + term
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            if mono:
                names = "*".join(
                    g + ("'" * n if n <= 3 else f"^({n})") for g, n in mono
                )
                bits.append(f"({c!r})*{names}")
            else:
                bits.append(f"({c!r})")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"DiffPoly({self.render()})"
