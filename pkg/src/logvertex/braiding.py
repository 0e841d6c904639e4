"""Braiding maps S = sum_i phi_i (x) psi_i on graded truncations.

EndoMaps are sparse operators given by their action on an explicit basis;
a braiding map is a finite list of component pairs subject to symmetry,
pairwise commutativity and vacuum annihilation (checked by ``validate``).
``jordan_chevalley`` splits a locally finite operator with declared spectrum
into commuting semisimple and nilpotent parts, and ``z_pow_S`` evaluates

    z^S = z^{S^(s)} e^{zeta S^(n)}

on a tensor pair as a finite exponent/zeta expansion over the common
generalized eigencomponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from . import states
from .errors import MissingSpectrum, SpectrumMismatch
from .scalars import DualScalar, GAUSS_ZERO, ONE, ZERO, dual, from_gauss
from .states import State, add_into, is_zero, scale, sub, unit


@dataclass(frozen=True, eq=False)
class EndoMap:
    """A linear operator by its (sparse) action on basis keys.

    ``spectrum`` optionally declares [(eigenvalue, nilpotency order), ...];
    declared data is verified, never trusted (see ``check_spectrum``).
    """

    action: Dict[Hashable, State]
    degree_shift: int = 0
    charge_shift: int = 0
    spectrum: Optional[Sequence[Tuple[DualScalar, int]]] = None

    def apply_key(self, key: Hashable) -> State:
        return self.action.get(key, {})

    def apply(self, s: State) -> State:
        out: State = {}
        for key, coeff in s.items():
            add_into(out, self.apply_key(key), coeff)
        return out

    def minus(self, scalar: DualScalar) -> "EndoMap":
        """The operator (self - scalar), on the same key set."""
        act = {}
        for key, image in self.action.items():
            shifted = dict(image)
            add_into(shifted, unit(key), -scalar)
            act[key] = shifted
        return EndoMap(act, self.degree_shift, self.charge_shift)

    def compose_apply(self, s: State, times: int) -> State:
        for _ in range(times):
            s = self.apply(s)
        return s


@dataclass(frozen=True, eq=False)
class BraidingMap:
    """S = sum_i phi_i (x) psi_i with a flag for the nilpotent (eps) case."""

    components: Tuple[Tuple[EndoMap, EndoMap], ...]
    nilpotent: bool = False

    def apply_pair(self, a: State, b: State) -> Dict:
        out: Dict = {}
        for phi, psi in self.components:
            pa, pb = phi.apply(a), psi.apply(b)
            for ka, ca in pa.items():
                for kb, cb in pb.items():
                    c = ca * cb
                    if c.is_zero():
                        continue
                    key = (ka, kb)
                    new = out.get(key)
                    new = c if new is None else new + c
                    if new.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = new
        return out


def _tensor_eq(x: Dict, y: Dict) -> bool:
    return x == y


def validate(
    b: BraidingMap,
    test_space: Sequence[Hashable],
    vacuum_key: Optional[Hashable] = None,
    grading: Optional[Callable] = None,
) -> List[dict]:
    """Symmetry, commutativity, grading and vacuum defects (empty = valid)."""
    defects: List[dict] = []
    swapped = BraidingMap(tuple((psi, phi) for phi, psi in b.components))
    for ka in test_space:
        for kb in test_space:
            lhs = b.apply_pair(unit(ka), unit(kb))
            rhs = swapped.apply_pair(unit(ka), unit(kb))
            if not _tensor_eq(lhs, rhs):
                defects.append({"kind": "symmetry", "pair": (ka, kb)})
    ops: List[EndoMap] = []
    for phi, psi in b.components:
        ops.extend((phi, psi))
    for i, op1 in enumerate(ops):
        for op2 in ops[i + 1 :]:
            for key in test_space:
                v = unit(key)
                if op1.apply(op2.apply(v)) != op2.apply(op1.apply(v)):
                    defects.append({"kind": "commutativity", "ops": (i,), "key": key})
                    break
    if vacuum_key is not None:
        for idx, (phi, psi) in enumerate(b.components):
            for name, op in (("phi", phi), ("psi", psi)):
                if not is_zero(op.apply_key(vacuum_key)):
                    defects.append({"kind": "vacuum", "component": (idx, name)})
    if grading is not None:
        for phi, psi in b.components:
            for name, op in (("phi", phi), ("psi", psi)):
                for key in test_space:
                    d, c = grading(key)
                    for image_key in op.apply_key(key):
                        di, ci = grading(image_key)
                        if (di, ci) != (d + op.degree_shift, c + op.charge_shift):
                            defects.append(
                                {"kind": "grading", "op": name, "key": key}
                            )
                            break
    for phi, psi in b.components:
        for name, op in (("phi", phi), ("psi", psi)):
            if op.spectrum is not None:
                for key in test_space:
                    if not is_zero(_annihilate(op, key)):
                        defects.append({"kind": "spectrum", "op": name, "key": key})
    return defects


def _annihilate(op: EndoMap, key: Hashable) -> State:
    v: State = unit(key)
    for d, order in op.spectrum:
        shifted = op.minus(d)
        for _ in range(order):
            if is_zero(v):
                return v
            v = shifted.apply(v)
    return v


# -- polynomial helpers over the dual ring -----------------------------------


def _poly_mul(p: List[DualScalar], q: List[DualScalar]) -> List[DualScalar]:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_shift(p: List[DualScalar], d: DualScalar) -> List[DualScalar]:
    """Coefficients of p(x + d)."""
    out = [ZERO] * len(p)
    for coeff in reversed(p):
        # out = out * (x + d) + coeff  in the shifted variable
        new = [ZERO] * len(p)
        for i in range(len(p) - 1):
            new[i + 1] = new[i + 1] + out[i]
        for i in range(len(p)):
            new[i] = new[i] + out[i] * d
        new[0] = new[0] + coeff
        out = new
    return out


def _series_inv(p: List[DualScalar], order: int) -> List[DualScalar]:
    """Inverse of a power series with unit constant term, mod x^order."""
    inv = [p[0].inv()]
    for n in range(1, order):
        acc = ZERO
        for t in range(1, n + 1):
            if t < len(p):
                acc = acc + p[t] * inv[n - t]
        inv.append(-(p[0].inv()) * acc)
    return inv


def _apply_poly(op: EndoMap, poly: List[DualScalar], v: State) -> State:
    out: State = {}
    cur = dict(v)
    for coeff in poly:
        add_into(out, cur, coeff)
        cur = op.apply(cur)
    return out


def spectral_projectors(op: EndoMap) -> List[Tuple[DualScalar, int, List[DualScalar]]]:
    """CRT projector polynomials: p_d = 1 mod (x-d)^k, 0 mod the others."""
    if op.spectrum is None:
        raise MissingSpectrum("operator has no declared spectrum")
    spec = list(op.spectrum)
    out = []
    for idx, (d, order) in enumerate(spec):
        others = [ZERO + ONE]
        for jdx, (e, oe) in enumerate(spec):
            if jdx == idx:
                continue
            factor = [-e, ONE]
            for _ in range(oe):
                others = _poly_mul(others, factor)
        # invert `others` modulo (x - d)^order: expand around x = d
        local = _poly_shift(others, d)[:order]
        local = local + [ZERO] * (order - len(local))
        if local[0].value.is_zero():
            raise SpectrumMismatch(f"repeated eigenvalue {d!r} in declared spectrum")
        inv_local = _series_inv(local, order)
        # g(x) = inv_local(x - d), projector = others * g
        g = _poly_shift_back(inv_local, d)
        out.append((d, order, _poly_mul(others, g)))
    return out


def _poly_shift_back(p: List[DualScalar], d: DualScalar) -> List[DualScalar]:
    """Coefficients of p(x - d) given p's coefficients in the local variable."""
    return _poly_shift(p, -d)


def jordan_chevalley(
    e: EndoMap, test_space: Sequence[Hashable]
) -> Tuple[EndoMap, EndoMap]:
    """Split e into (semisimple, nilpotent) using its declared spectrum.

    Verifies the annihilator property on the test space first and that the
    two parts commute and sum back to e; raises SpectrumMismatch otherwise.
    """
    if e.spectrum is None:
        raise MissingSpectrum("jordan_chevalley needs a declared spectrum")
    for key in test_space:
        if not is_zero(_annihilate(e, key)):
            raise SpectrumMismatch(f"annihilator fails on {key!r}")
    projectors = spectral_projectors(e)
    semi_action: Dict[Hashable, State] = {}
    for key in test_space:
        acc: State = {}
        for d, _order, poly in projectors:
            add_into(acc, _apply_poly(e, poly, unit(key)), d)
        semi_action[key] = acc
    semi = EndoMap(
        semi_action,
        e.degree_shift,
        e.charge_shift,
        spectrum=[(d, 1) for d, _o in e.spectrum],
    )
    nil_action = {
        key: sub(e.apply_key(key), semi.apply_key(key)) for key in test_space
    }
    nil_order = max(order for _d, order in e.spectrum)
    nil = EndoMap(
        nil_action, e.degree_shift, e.charge_shift, spectrum=[(ZERO, nil_order)]
    )
    for key in test_space:
        v = unit(key)
        if semi.apply(nil.apply(v)) != nil.apply(semi.apply(v)):
            raise SpectrumMismatch(f"parts fail to commute on {key!r}")
    return semi, nil


@dataclass
class SpectralComponent:
    eigenvalue: DualScalar
    component: Dict  # tensor state
    nilpotent_order: int


@dataclass
class SpectralDecomposition:
    components: List[SpectralComponent]

    def total(self) -> Dict:
        out: Dict = {}
        for comp in self.components:
            for key, c in comp.component.items():
                new = out.get(key, ZERO) + c
                if new.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = new
        return out


def decompose_pair(b: BraidingMap, a: State, c: State) -> SpectralDecomposition:
    """Common generalized eigencomponents of S^(s) on a (x) c.

    Components phi_i are simultaneously projected on the left factor, psi_i on
    the right; the S^(s) eigenvalue on a component is sum_i d_i * e_i.
    """
    left_ops = [phi for phi, _psi in b.components]
    right_ops = [psi for _phi, psi in b.components]

    def refine(side_ops: List[EndoMap], v: State):
        pieces = [((), v)]
        for op in side_ops:
            new_pieces = []
            for tag, piece in pieces:
                for d, _order, poly in spectral_projectors(op):
                    proj = _apply_poly(op, poly, piece)
                    if not is_zero(proj):
                        new_pieces.append((tag + (d,), proj))
            pieces = new_pieces
        return pieces

    comps: List[SpectralComponent] = []
    for ltag, lpiece in refine(left_ops, a):
        for rtag, rpiece in refine(right_ops, c):
            eig = ZERO
            for dl, dr in zip(ltag, rtag):
                eig = eig + dl * dr
            tens: Dict = {}
            for ka, ca in lpiece.items():
                for kb, cb in rpiece.items():
                    cc = ca * cb
                    if not cc.is_zero():
                        tens[(ka, kb)] = tens.get((ka, kb), ZERO) + cc
            tens = {k: v for k, v in tens.items() if not v.is_zero()}
            if tens:
                comps.append(SpectralComponent(eig, tens, nilpotent_order=0))
    return SpectralDecomposition(comps)


def z_pow_S(b: BraidingMap, a: State, c: State, test_space: Sequence[Hashable]):
    """z^S (a (x) c) as a list of (exponent d, zeta power p, tensor state).

    d runs over S^(s) eigenvalues on the common eigencomponents; each carries
    the finite expansion (1/p!) zeta^p (S^(n))^p of e^{zeta S^(n)}.
    """
    split = {}
    for phi, psi in b.components:
        phis, phin = jordan_chevalley(phi, test_space)
        psis, psin = jordan_chevalley(psi, test_space)
        split[(phi, psi)] = (phis, phin, psis, psin)

    def snil(tens: Dict) -> Dict:
        out: Dict = {}

        def tensor_apply(left: EndoMap, right: EndoMap, t: Dict, acc: Dict):
            for (ka, kb), cc0 in t.items():
                for k1, c1 in left.apply_key(ka).items():
                    for k2, c2 in right.apply_key(kb).items():
                        cc = cc0 * c1 * c2
                        if cc.is_zero():
                            continue
                        key = (k1, k2)
                        new = acc.get(key, ZERO) + cc
                        if new.is_zero():
                            acc.pop(key, None)
                        else:
                            acc[key] = new

        for (phis, phin, psis, psin) in split.values():
            tensor_apply(phis, psin, t=tens, acc=out)
            tensor_apply(phin, psis, t=tens, acc=out)
            tensor_apply(phin, psin, t=tens, acc=out)
        return out

    semis = BraidingMap(tuple((split[p][0], split[p][2]) for p in split))
    decomp = decompose_pair(semis, a, c)
    out = []
    for comp in decomp.components:
        tens = comp.component
        p = 0
        fact = 1
        while tens:
            scaled = {k: v * dual(_frac(1, fact)) for k, v in tens.items()}
            out.append((comp.eigenvalue, p, scaled))
            tens = snil(tens)
            p += 1
            fact *= p
            if p > 64:
                raise SpectrumMismatch("S^(n) fails to be nilpotent on the pair")
    return out


def _frac(a, b):
    from fractions import Fraction

    return Fraction(a, b)
