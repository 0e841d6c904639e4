"""Generic braided logarithmic vertex algebra engine.

An algebra plugs in through :class:`LogVAInstance`: a vacuum, a graded basis
enumerator, mode actions mu(a, n, b) = a_{(n+S)}b, a declared translation
operator, and the braiding through scalar eigenvalues on charge pairs (every
built-in braiding acts on a pair of charge-homogeneous states as
multiplication by a dual scalar).  On top of that contract this module
implements:

- the state-field evaluation  Y(a, z)b = sum_n mu_n(z^{-n-1-S}(a (x) b)),
- the translation operator  T(a) = a_{(-2+S)}|0>  and covariance checking,
- the mode recursion solving the Borcherds identity for modes of a_{(n+S)}b
  without forming the product state,
- defect-valued verifiers for the vacuum, hexagon, Borcherds and locality
  axioms (a verifier returns the exact offending coefficients, never a bool),
- reconstruction of states from field expression trees, and
- extraction of generalized vertex algebra data (Q, Delta, eta) from a
  semisimple braiding matrix.

All j-sums are bounded by the grading: mu(a, n, b) = 0 once
n >= deg a + deg b, so every verifier is exact, not approximate.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from . import states
from .errors import NonSymmetric, TranslationMismatch, Unsupported
from .logseries import LogSeries, ZDIR_12, ZDIR_21, iota_expand
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
)
from .states import State, add_into, is_zero, scale, sub, unit


class LogVAInstance(ABC):
    """Pluggable description of a braided logarithmic vertex algebra.

    States are sparse dicts over hashable basis keys (see
    :mod:`logvertex.states`).  Implementations must keep ``mu`` pure: any
    internal memoisation has to behave as an idempotent cache.
    """

    name: str = "abstract"
    dual_ring: bool = False

    @property
    @abstractmethod
    def vacuum_key(self) -> Hashable: ...

    def vacuum(self) -> State:
        return unit(self.vacuum_key)

    @abstractmethod
    def basis(self, degree: int, charge: Optional[int] = None) -> List[Hashable]:
        """All basis keys of the given degree (and charge, if given)."""

    @abstractmethod
    def degree_of(self, key: Hashable) -> int: ...

    @abstractmethod
    def charge_of(self, key: Hashable) -> int: ...

    @abstractmethod
    def mu(self, a: State, n: int, b: State) -> State:
        """The product a_{(n+S)}b."""

    @abstractmethod
    def translate_state(self, a: State) -> State:
        """The declared translation operator."""

    @abstractmethod
    def braiding_scalar(self, charge_a: int, charge_b: int) -> DualScalar:
        """Eigenvalue of S on a (charge_a, charge_b)-homogeneous pair."""

    def generator_states(self) -> Dict[str, State]:
        """The complete generating set, by name (may be empty)."""
        return {}

    # -- derived helpers ---------------------------------------------------

    def state_degree(self, s: State) -> int:
        return max((self.degree_of(k) for k in s), default=0)

    def trunc_bound(self, a: State, b: State) -> int:
        """n0 with mu(a, n, b) = 0 for all n >= n0 (grading bound)."""
        return self.state_degree(a) + self.state_degree(b)

    def charge_pieces(self, s: State) -> Dict[int, State]:
        out: Dict[int, State] = {}
        for k, c in s.items():
            out.setdefault(self.charge_of(k), {})[k] = c
        return out

    def braiding_pieces(
        self, a: State, b: State
    ) -> List[Tuple[State, State, DualScalar]]:
        """Split a (x) b into pieces on which S acts by a scalar."""
        out = []
        for qa, pa in self.charge_pieces(a).items():
            for qb, pb in self.charge_pieces(b).items():
                out.append((pa, pb, self.braiding_scalar(qa, qb)))
        return out


# ---------------------------------------------------------------------------
# binomial operators binom(n+S, j) on spectral components
# ---------------------------------------------------------------------------


def _binom_poly(n: int, j: int) -> List[Fraction]:
    """Coefficients of binom(n+x, j) as a polynomial in x over Q."""
    coeffs = [Fraction(1)]
    for s in range(j):
        shifted = [Fraction(0)] + coeffs  # multiply by x
        for t, c in enumerate(coeffs):
            shifted[t] += c * (n - s)  # plus (n-s)
        coeffs = shifted
    fact = 1
    for t in range(1, j + 1):
        fact *= t
    return [c / fact for c in coeffs]


def binom_op(n: int, j: int, d: DualScalar, nilpotent, order: int, v: State) -> State:
    """Evaluate binom(n+S, j) v on a component where S = d + N, N^order = 0.

    ``nilpotent`` is the action of N (a callable on states);
    the value is sum_{t<order} (1/t!) (d^t/dx^t binom(n+x, j))|_{x=d} N^t v.
    """
    coeffs = _binom_poly(n, j)
    out: State = {}
    cur = dict(v)
    fact = 1
    for t in range(order):
        if t:
            fact *= t
            cur = nilpotent(cur)
        if is_zero(cur):
            break
        deriv = ZERO
        power = ONE
        for r in range(t, len(coeffs)):
            falling = 1
            for u in range(t):
                falling *= r - u
            deriv = deriv + dual(coeffs[r] * falling) * power
            power = power * d
        add_into(out, cur, deriv * dual(Fraction(1, fact)))
    return out


# ---------------------------------------------------------------------------
# state-field map and translation
# ---------------------------------------------------------------------------

Window = Tuple[Fraction, Fraction]


def y_action(inst: LogVAInstance, a: State, b: State, window: Window) -> LogSeries:
    """Coefficients of Y(a, z)b with exponent real parts inside the window.

    Exponents are -n-1-d on each spectral piece; the nilpotent part of the
    braiding eigenvalue contributes a zeta-linear layer with coefficient
    -N (from z^{-S} = z^{-d} e^{-zeta N}).
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    out = LogSeries()
    for a_i, b_i, s in inst.braiding_pieces(a, b):
        val = s.value
        nil = DualScalar(GAUSS_ZERO, s.eps)
        # alpha = -n-1-val: n in [-1-val.re-hi, -1-val.re-lo]
        n_min = (-1 - val.re - hi).__ceil__()
        n_max = (-1 - val.re - lo).__floor__()
        n_max = min(n_max, inst.trunc_bound(a_i, b_i) - 1)
        for n in range(n_min, n_max + 1):
            u = inst.mu(a_i, n, b_i)
            if is_zero(u):
                continue
            alpha = gauss(-n - 1) - val
            out.add_term(alpha, 0, u)
            if not nil.is_zero():
                out.add_term(alpha, 1, scale(-nil, u))
    return out


def translate(inst: LogVAInstance, a: State) -> State:
    """T(a) = a_{(-2+S)}|0>; raises if the declared translation disagrees."""
    computed = inst.mu(a, -2, inst.vacuum())
    declared = inst.translate_state(a)
    if computed != declared:
        raise TranslationMismatch(
            f"a_(-2+S)|0> = {computed!r} but declared T a = {declared!r}"
        )
    return computed


def series_apply(op, series: LogSeries) -> LogSeries:
    out = LogSeries()
    for (alpha, j), coeff_state in series.terms.items():
        out.add_term(alpha, j, op(coeff_state))
    return out


def check_translation_covariance(
    inst: LogVAInstance,
    a: State,
    targets: Sequence[State],
    window: Window,
) -> List[dict]:
    """Coefficient-wise defect of [T, Y(a,z)]b - D_z Y(a,z)b per target.

    D_z shifts exponents down by one, so the defect is compared on
    [lo, hi-1] where the inputs were computed on [lo, hi].
    """
    from .logseries import dz_total

    lo, hi = Fraction(window[0]), Fraction(window[1])
    defects = []
    for idx, b in enumerate(targets):
        ya_b = y_action(inst, a, b, (lo, hi))
        lhs = series_apply(inst.translate_state, ya_b) - y_action(
            inst, a, inst.translate_state(b), (lo, hi)
        )
        rhs = dz_total(ya_b)
        defect = lhs - rhs
        for (alpha, j), coeff in sorted(
            defect.terms.items(), key=lambda kv: (kv[0][0].re, kv[0][1])
        ):
            if lo <= alpha.re <= hi - 1 and not is_zero(coeff):
                defects.append(
                    {"target": idx, "exp": alpha, "zeta": j, "defect": coeff}
                )
    return defects


# ---------------------------------------------------------------------------
# Borcherds identity and the mode recursion
# ---------------------------------------------------------------------------


def check_borcherds(
    inst: LogVAInstance, a: State, b: State, c: State, m: int, n: int, k: int
) -> State:
    """LHS - RHS of the Borcherds identity on a (x) b (x) c; zero iff it holds."""
    defect: State = {}
    for a_i, b_i, s in inst.braiding_pieces(a, b):
        # sum_j (-1)^j mu_{m+n-j}(I (x) mu_{k+j}) binom(n+S_12, j)
        for j in range(0, max(0, inst.trunc_bound(b_i, c) - k)):
            inner = inst.mu(b_i, k + j, c)
            if is_zero(inner):
                continue
            coeff = binomial(dual(n) + s, j)
            if j % 2:
                coeff = -coeff
            add_into(defect, inst.mu(a_i, m + n - j, inner), coeff)
        # - sum_j (-1)^{n+j} mu_{n+k-j}(I (x) mu_{m+j}) (-1)^{S^(s)} binom P_12
        sign_s = minus_one_pow(s.value)
        for j in range(0, max(0, inst.trunc_bound(a_i, c) - m)):
            inner = inst.mu(a_i, m + j, c)
            if is_zero(inner):
                continue
            coeff = sign_s * binomial(dual(n) + s, j)
            if (n + j) % 2:
                coeff = -coeff
            add_into(defect, inst.mu(b_i, n + k - j, inner), -coeff)
    # - sum_j mu_{m+k-j}(mu_{n+j} (x) I) binom(m+S_13, j)
    for a_l, c_l, t in inst.braiding_pieces(a, c):
        for j in range(0, max(0, inst.trunc_bound(a_l, b) - n)):
            prod = inst.mu(a_l, n + j, b)
            if is_zero(prod):
                continue
            coeff = binomial(dual(m) + t, j)
            add_into(defect, inst.mu(prod, m + k - j, c_l), -coeff)
    return defect


def nth_product_modes(
    inst: LogVAInstance, a: State, n: int, b: State, k: int, c: State
) -> State:
    """The k-th mode of a_{(n+S)}b applied to c, by the Borcherds recursion.

    Solves the m = 0 Borcherds identity for the j = 0 term of its right-hand
    side; the product state a_{(n+S)}b is never formed.  Terminates because
    the correction terms raise n toward the truncation bound.
    """
    if is_zero(a) or is_zero(b) or is_zero(c):
        return {}
    if n >= inst.trunc_bound(a, b):
        return {}
    out: State = {}
    for a_i, b_i, s in inst.braiding_pieces(a, b):
        for j in range(0, max(0, inst.trunc_bound(b_i, c) - k)):
            inner = inst.mu(b_i, k + j, c)
            if is_zero(inner):
                continue
            coeff = binomial(dual(n) + s, j)
            if j % 2:
                coeff = -coeff
            add_into(out, inst.mu(a_i, n - j, inner), coeff)
        sign_s = minus_one_pow(s.value)
        for j in range(0, inst.trunc_bound(a_i, c)):
            inner = inst.mu(a_i, j, c)
            if is_zero(inner):
                continue
            coeff = sign_s * binomial(dual(n) + s, j)
            if (n + j) % 2:
                coeff = -coeff
            add_into(out, inst.mu(b_i, n + k - j, inner), -coeff)
    for a_l, c_l, t in inst.braiding_pieces(a, c):
        for j in range(1, max(1, inst.trunc_bound(a_l, b) - n)):
            coeff = binomial(t, j)
            if coeff.is_zero():
                continue
            term = nth_product_modes(inst, a_l, n + j, b, k - j, c_l)
            add_into(out, term, -coeff)
    return out


# ---------------------------------------------------------------------------
# hexagon and locality
# ---------------------------------------------------------------------------


def _tensor_add(acc, a: State, b: State, coeff: DualScalar) -> None:
    for ka, ca in a.items():
        for kb, cb in b.items():
            c = ca * cb * coeff
            if c.is_zero():
                continue
            key = (ka, kb)
            new = acc.get(key)
            new = c if new is None else new + c
            if new.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = new


def check_hexagon(inst: LogVAInstance, a: State, b: State, c: State, n: int) -> Dict:
    """Defect of S(mu_n (x) I) = (mu_n (x) I)(S_13 + S_23) on a (x) b (x) c."""
    defect: Dict = {}
    u = inst.mu(a, n, b)
    for u_l, c_l, s in inst.braiding_pieces(u, c):
        _tensor_add(defect, u_l, c_l, s)
    for a_q, c_q, t in inst.braiding_pieces(a, c):
        _tensor_add(defect, inst.mu(a_q, n, b), c_q, -t)
    for b_r, c_r, t in inst.braiding_pieces(b, c):
        _tensor_add(defect, inst.mu(a, n, b_r), c_r, -t)
    return defect


def _two_var_add(acc, key, state: State, coeff: DualScalar) -> None:
    if is_zero(state) or coeff.is_zero():
        return
    cur = acc.get(key)
    if cur is None:
        cur = {}
        acc[key] = cur
    add_into(cur, state, coeff)
    if not cur:
        acc.pop(key, None)


def _locality_side(
    inst: LogVAInstance,
    first: State,
    second: State,
    c: State,
    N: int,
    direction: str,
    window,
):
    """One side of the locality identity as a two-variable series.

    direction ZDIR_12: Y(z1)(I (x) Y(z2)) iota_{z1,z2} z12^{N+S} (first (x) second) (x) c
    direction ZDIR_21: Y(z2)(I (x) Y(z1)) iota_{z2,z1} z12^{N+S} (first (x) second) (x) c
    with keys (alpha1, alpha2, zeta1_pow, zeta2_pow).
    """
    lo1, hi1, lo2, hi2 = (Fraction(x) for x in window)
    acc: Dict = {}
    for f_i, s_i, s in inst.braiding_pieces(first, second):
        # outer variable of the iota expansion carries its zeta layer
        if direction == ZDIR_12:
            inner_state, outer_state = s_i, f_i
            inner_lo, inner_hi, outer_lo, outer_hi = lo2, hi2, lo1, hi1
        else:
            inner_state, outer_state = s_i, f_i
            inner_lo, inner_hi, outer_lo, outer_hi = lo1, hi1, lo2, hi2
        # bound on iota's j: beyond it the shifted inner window drops below
        # the exponent floor -trunc - max|d| of Y(inner)(c)
        floor = None
        for _x, _y, d2 in inst.braiding_pieces(inner_state, c):
            cand = Fraction(-inst.trunc_bound(inner_state, c)) - d2.value.re
            floor = cand if floor is None else min(floor, cand)
        if floor is None:
            continue
        jmax = max(0, (inner_hi - floor).__floor__() + 1)
        iota = iota_expand(direction, N, s, 2, jmax)
        for t in iota.terms:
            if direction == ZDIR_12:
                shift_outer, shift_inner = t.z1_exp, t.z2_exp
            else:
                shift_outer, shift_inner = t.z2_exp, t.z1_exp
            inner_series = y_action(
                inst,
                inner_state,
                c,
                (inner_lo - shift_inner.re, inner_hi - shift_inner.re),
            )
            for (a_in, p_in), u in inner_series.terms.items():
                outer_series = y_action(
                    inst,
                    outer_state,
                    u,
                    (outer_lo - shift_outer.re, outer_hi - shift_outer.re),
                )
                for (a_out, p_out), v in outer_series.terms.items():
                    if direction == ZDIR_12:
                        key = (
                            a_out + shift_outer,
                            a_in + shift_inner,
                            p_out + t.zeta_power,
                            p_in,
                        )
                    else:
                        key = (
                            a_in + shift_inner,
                            a_out + shift_outer,
                            p_in,
                            p_out + t.zeta_power,
                        )
                    _two_var_add(acc, key, v, t.coeff)
    return acc


def check_locality(
    inst: LogVAInstance,
    a: State,
    b: State,
    N: int,
    targets: Sequence[State],
    window,
) -> List[dict]:
    """Exact coefficient comparison of the two iota-expanded compositions.

    window = (lo1, hi1, lo2, hi2) bounds the exponent real parts of z1, z2.
    Returns one record per nonzero defect coefficient.
    """
    defects = []
    for idx, c in enumerate(targets):
        lhs = _locality_side(inst, a, b, c, N, ZDIR_12, window)
        rhs = _locality_side(inst, b, a, c, N, ZDIR_21, window)
        keys = set(lhs) | set(rhs)
        for key in sorted(keys, key=lambda kk: (kk[0].re, kk[1].re, kk[2], kk[3])):
            d = sub(lhs.get(key, {}), rhs.get(key, {}))
            if not is_zero(d):
                defects.append(
                    {
                        "target": idx,
                        "exp1": key[0],
                        "exp2": key[1],
                        "zeta1": key[2],
                        "zeta2": key[3],
                        "defect": d,
                    }
                )
    return defects


def check_vacuum(inst: LogVAInstance, degree_cutoff: int, n_window=(-3, 3)) -> List[dict]:
    """mu(|0>, n, a) = delta_{n,-1} a and mu(a, -1, |0>) = a over the basis."""
    defects = []
    vac = inst.vacuum()
    for d in range(0, degree_cutoff + 1):
        for key in inst.basis(d):
            a = unit(key)
            for n in range(n_window[0], n_window[1] + 1):
                expect = a if n == -1 else {}
                got = inst.mu(vac, n, a)
                if got != expect:
                    defects.append({"key": key, "n": n, "kind": "vac-left", "defect": sub(got, expect)})
            got = inst.mu(a, -1, vac)
            if got != a:
                defects.append({"key": key, "n": -1, "kind": "vac-right", "defect": sub(got, a)})
            # S(|0> (x) a) = 0 and S(a (x) |0>) = 0
            for x, y, s in inst.braiding_pieces(vac, a) + inst.braiding_pieces(a, vac):
                if not s.is_zero():
                    defects.append({"key": key, "kind": "vac-braiding", "defect": {"s": s}})
    return defects


# ---------------------------------------------------------------------------
# field expression trees and reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ident:
    """The identity field I."""


@dataclass(frozen=True)
class Gen:
    """A named generator field."""

    name: str


@dataclass(frozen=True)
class NProd:
    """The (n+S)-th product of two field expressions."""

    left: object
    n: int
    right: object


def theta_reconstruct(inst: LogVAInstance, expr) -> State:
    """Theta(expr) = expr(z)|0> |_{z=0}.

    Computed through the homomorphism property
    Theta(a_{(n+S)}b) = a_{(n+S)} Theta(b): products of field expressions map
    to instance products of the reconstructed states.
    """
    if isinstance(expr, Ident):
        return inst.vacuum()
    if isinstance(expr, Gen):
        gens = inst.generator_states()
        if expr.name not in gens:
            raise KeyError(f"unknown generator {expr.name!r}")
        return gens[expr.name]
    if isinstance(expr, NProd):
        left = theta_reconstruct(inst, expr.left)
        right = theta_reconstruct(inst, expr.right)
        return inst.mu(left, expr.n, right)
    raise TypeError(f"not a field expression: {expr!r}")


# ---------------------------------------------------------------------------
# generalized vertex algebra data
# ---------------------------------------------------------------------------


@dataclass
class GVAData:
    labels: Tuple[str, ...]
    classes: List[Tuple[int, ...]]
    class_of: Dict[int, int]
    delta: Dict[Tuple[int, int], GaussScalar]  # mod Z representative in [0,1)
    group_table: Dict[Tuple[int, int], Optional[int]]
    neutral: Optional[int]
    partial: List[dict] = field(default_factory=list)

    def eta(self, i: int, j: int) -> DualScalar:
        return ONE


def _mod_z(x: GaussScalar) -> GaussScalar:
    return GaussScalar(x.re - x.re.__floor__(), x.im)


def _is_int(x: GaussScalar) -> bool:
    return x.is_integer()


def gva_extract(labels: Sequence[str], matrix: Sequence[Sequence[GaussScalar]]) -> GVAData:
    """Partition, abelian group law, Delta and eta from a symmetric s-matrix.

    Classes: I_i = {j : s_jl - s_il in Z for all l}; the group law is
    I_i + I_j = {k : s_kl - s_il - s_jl in Z for all l} (reported as partial
    when the combination class is empty); Delta(I_i, I_j) = s_ij mod Z and
    eta is constantly 1.
    """
    idx = range(len(labels))
    for i in idx:
        for j in idx:
            if matrix[i][j] != matrix[j][i]:
                raise NonSymmetric(f"s[{i}][{j}] != s[{j}][{i}]")

    def same_class(i: int, j: int) -> bool:
        return all(_is_int(matrix[j][l] - matrix[i][l]) for l in idx)

    classes: List[Tuple[int, ...]] = []
    class_of: Dict[int, int] = {}
    for i in idx:
        for ci, members in enumerate(classes):
            if same_class(i, members[0]):
                class_of[i] = ci
                classes[ci] = members + (i,)
                break
        else:
            class_of[i] = len(classes)
            classes.append((i,))

    def combine(r: int, i: int, t: int, j: int) -> Optional[int]:
        hits = [
            k
            for k in idx
            if all(
                _is_int(
                    matrix[k][l]
                    - GaussScalar(r) * matrix[i][l]
                    - GaussScalar(t) * matrix[j][l]
                )
                for l in idx
            )
        ]
        if not hits:
            return None
        return class_of[hits[0]]

    partial: List[dict] = []
    table: Dict[Tuple[int, int], Optional[int]] = {}
    for ci, ms in enumerate(classes):
        for cj, ns in enumerate(classes):
            got = combine(1, ms[0], 1, ns[0])
            table[(ci, cj)] = got
            if got is None:
                partial.append({"op": "add", "classes": (ci, cj)})
    neutral = combine(0, 0, 0, 0) if labels else None
    if neutral is None and labels:
        partial.append({"op": "neutral"})

    delta = {
        (ci, cj): _mod_z(matrix[ms[0]][ns[0]])
        for ci, ms in enumerate(classes)
        for cj, ns in enumerate(classes)
    }
    return GVAData(
        labels=tuple(labels),
        classes=classes,
        class_of=class_of,
        delta=delta,
        group_table=table,
        neutral=neutral,
        partial=partial,
    )
