"""The non-linear Schrodinger mode algebra and its vacuum module.

Two associative algebras on generators w_n, wbar_n (n in Z) act here:

- the undeformed one, with quadratic relations

      sum_{j>=0} ( w_{m-j} w_{k+j} + w_{k-j} w_{m+j} ) = 0          (ww)
      sum_{j>=0} ( wb_{m-j} wb_{k+j} + wb_{k-j} wb_{m+j} ) = 0      (wbwb)
      w_m wb_k - w_{m-1} wb_{k+1} + wb_k w_m - wb_{k-1} w_{m+1} = 0 (wwb)

- the eps-deformed one over Q(i)[eps]/(eps^2), with

      sum_{j>=0} (-1)^j binom(-eps, j) ( g_{m-j} g_{k+j} - g_{k-j} g_{m+j} ) = 0
      w_m wb_k - eps w_{m-1} wb_{k+1} - wb_k w_m + eps wb_{k-1} w_{m+1} = 0

  which is commutative mod eps.

Both act on the vacuum module spanned by creation monomials
g^1_{n_1} ... g^r_{n_r} |0> with n_i <= -1, where g_n |0> = 0 for n >= 0.
Monomials are kept in the normal form "modes weakly increasing left to right,
w before wbar at equal modes"; in the undeformed algebra a repeated factor
(same letter, same mode) is reducible and excluded from the normal form, in
the deformed algebra repeated factors are genuine basis elements (the m = k
relation instance is vacuous there).

``act`` is the straightening action (rewrite against the relations, memoized,
budget-guarded); ``oracle_reduce`` is the independent brute-force row-reduction
semantics every straightening path is certified against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import engine, states
from .errors import OracleDefect, RecursionBudgetExceeded
from .scalars import (
    DualScalar,
    EPS,
    GAUSS_ZERO,
    GaussScalar,
    I,
    MINUS_ONE,
    ONE,
    ZERO,
    binomial,
    dual,
)
from .states import State, add_into, is_zero, scale, unit

W, WB = 0, 1
LETTER_NAMES = ("w", "wb")
Factor = Tuple[int, int]  # (letter, mode)
Mono = Tuple[Factor, ...]

VACUUM: Mono = ()


def degree(mono: Mono) -> int:
    return -sum(m for _g, m in mono)


def charge(mono: Mono) -> int:
    return sum(1 if g == W else -1 for g, m in mono)


def _key(factor: Factor):
    g, m = factor
    return (m, g)


def is_normal(mono: Mono, deformed: bool) -> bool:
    for i in range(len(mono) - 1):
        if _key(mono[i]) > _key(mono[i + 1]):
            return False
        if mono[i] == mono[i + 1] and not deformed:
            return False
    return all(m <= -1 for _g, m in mono)


def mono_str(mono: Mono) -> str:
    if not mono:
        return "|0>"
    return " ".join(f"{LETTER_NAMES[g]}[{m}]" for g, m in mono) + " |0>"


def mono_parse(text: str) -> Mono:
    parts = text.replace("|0>", "").split()
    out = []
    for p in parts:
        name, rest = p.split("[")
        out.append((LETTER_NAMES.index(name), int(rest.rstrip("]"))))
    return tuple(out)


def state_str(s: State) -> str:
    if not s:
        return "0"
    bits = []
    for mono in sorted(s, key=lambda mm: (degree(mm), charge(mm), mm)):
        bits.append(f"({s[mono]!r}) {mono_str(mono)}")
    return " + ".join(bits)


def enumerate_basis(d: int, c: Optional[int] = None, deformed: bool = False) -> List[Mono]:
    """All normal monomials of the given degree (and charge), sorted."""
    if d < 0:
        return []
    out: List[Mono] = []

    def rec(prefix: List[Factor], rem: int, last: Optional[Factor]):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for m in range(-rem, 0):
            for g in (W, WB):
                factor = (g, m)
                if last is not None:
                    if _key(factor) < _key(last):
                        continue
                    if factor == last and not deformed:
                        continue
                prefix.append(factor)
                rec(prefix, rem + m, factor)
                prefix.pop()

    rec([], d, None)
    if c is not None:
        out = [mono for mono in out if charge(mono) == c]
    return sorted(out, key=lambda mono: (charge(mono), mono))


# ---------------------------------------------------------------------------
# relation instances
# ---------------------------------------------------------------------------

KIND_WW = "ww"
KIND_WBWB = "wbwb"
KIND_WWB = "wwb"


@dataclass(frozen=True)
class RelationInstance:
    """One relation with fixed indices, as a finite list of operator words.

    ``terms`` are (coefficient, ((letter, mode), (letter, mode))) pairs; the
    word acts on states of degree <= tail_degree, which truncates the infinite
    j-sums exactly (a mode above the target degree annihilates).
    """

    kind: str
    m: int
    k: int
    deformed: bool
    tail_degree: int
    terms: Tuple[Tuple[DualScalar, Tuple[Factor, Factor]], ...]


def relation_instance(
    kind: str, m: int, k: int, deformed: bool, tail_degree: int
) -> RelationInstance:
    terms: List[Tuple[DualScalar, Tuple[Factor, Factor]]] = []
    if kind in (KIND_WW, KIND_WBWB):
        g = W if kind == KIND_WW else WB
        j = 0
        while True:
            c = binomial(-EPS, j) if deformed else ONE
            if deformed and j % 2:
                c = -c
            first_alive = k + j <= tail_degree
            second_alive = m + j <= tail_degree
            if not first_alive and not second_alive:
                break
            if first_alive:
                terms.append((c, ((g, m - j), (g, k + j))))
            if second_alive:
                terms.append((-c if deformed else c, ((g, k - j), (g, m + j))))
            j += 1
    elif kind == KIND_WWB:
        if deformed:
            # braiding eigenvalue +eps on (w, wb): full binom(eps, j) tail
            j = 0
            while True:
                c = binomial(EPS, j)
                if j % 2:
                    c = -c
                first_alive = k + j <= tail_degree
                second_alive = m + j <= tail_degree
                if not first_alive and not second_alive:
                    break
                if first_alive:
                    terms.append((c, ((W, m - j), (WB, k + j))))
                if second_alive:
                    terms.append((-c, ((WB, k - j), (W, m + j))))
                j += 1
        else:
            terms = [
                (ONE, ((W, m), (WB, k))),
                (MINUS_ONE, ((W, m - 1), (WB, k + 1))),
                (ONE, ((WB, k), (W, m))),
                (MINUS_ONE, ((WB, k - 1), (W, m + 1))),
            ]
            terms = [(c, word) for c, word in terms if word[1][1] <= tail_degree]
    else:
        raise ValueError(f"unknown relation kind {kind!r}")
    return RelationInstance(kind, m, k, deformed, tail_degree, tuple(terms))


# ---------------------------------------------------------------------------
# straightening
# ---------------------------------------------------------------------------


class NLSAlgebra:
    """Straightening engine for one deformation flag.

    ``act(letter, n, v)`` is the module action of the mode operator g_n,
    rewriting against the defining relations until every monomial is normal.
    Rewrites are memoized per (letter, mode, monomial); a budget guard turns
    runaway recursion into RecursionBudgetExceeded with a witness.
    """

    def __init__(self, deformed: bool, budget: int = 5_000_000):
        self.deformed = deformed
        self.budget = budget
        self._steps = 0
        self._memo: Dict[Tuple[int, int, Mono], State] = {}
        self._t_memo: Dict[Mono, State] = {}

    # -- module action ----------------------------------------------------

    def act(self, letter: int, n: int, v: State) -> State:
        out: State = {}
        for mono, coeff in v.items():
            add_into(out, self._act_mono(letter, n, mono), coeff)
        return out

    def act_word(self, word: Sequence[Factor], v: State) -> State:
        for g, m in reversed(list(word)):
            v = self.act(g, m, v)
        return v

    def _act_mono(self, g: int, n: int, mono: Mono) -> State:
        key = (g, n, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._steps += 1
        if self._steps > self.budget:
            raise RecursionBudgetExceeded((LETTER_NAMES[g], n, mono_str(mono)))
        result = self._rewrite(g, n, mono)
        self._memo[key] = result
        return result

    def _rewrite(self, g: int, n: int, mono: Mono) -> State:
        if not mono:
            return {} if n >= 0 else unit(((g, n),))
        head = mono[0]
        h, k = head
        factor = (g, n)
        if _key(factor) < _key(head) or (
            _key(factor) == _key(head) and (g != h or self.deformed)
        ):
            return unit((factor,) + mono)
        tail = unit(mono[1:])
        td = degree(mono[1:])
        if g == h:
            if n == k:
                # undeformed square: g_n g_n = - sum_{j>=1} g_{n-j} g_{n+j}
                out: State = {}
                j = 1
                while n + j <= td:
                    add_into(out, self._pair(g, n - j, g, n + j, tail), MINUS_ONE)
                    j += 1
                return out
            # same letter, n > k
            if self.deformed:
                out = self._pair(g, k, g, n, tail)
                j = 1
                while k + j <= td or n + j <= td:
                    c = DualScalar(GAUSS_ZERO, GaussScalar(Fraction(-1, j)))
                    if k + j <= td:
                        add_into(out, self._pair(g, n - j, g, k + j, tail), c)
                    if n + j <= td:
                        add_into(out, self._pair(g, k - j, g, n + j, tail), -c)
                    j += 1
                return out
            out = scale(MINUS_ONE, self._pair(g, k, g, n, tail))
            j = 1
            while k + j <= td or n + j <= td:
                if k + j <= td:
                    add_into(out, self._pair(g, n - j, g, k + j, tail), MINUS_ONE)
                if n + j <= td:
                    add_into(out, self._pair(g, k - j, g, n + j, tail), MINUS_ONE)
                j += 1
            return out
        if g == WB:
            # wb_n w_k with n >= k
            if self.deformed:
                # wb_n w_k = w_k wb_n - eps sum_j (1/j)(w_{k-j} wb_{n+j} - wb_{n-j} w_{k+j})
                out = self._pair(W, k, WB, n, tail)
                j = 1
                while n + j <= td or k + j <= td:
                    c = DualScalar(GAUSS_ZERO, GaussScalar(Fraction(-1, j)))
                    if n + j <= td:
                        add_into(out, self._pair(W, k - j, WB, n + j, tail), c)
                    if k + j <= td:
                        add_into(out, self._pair(WB, n - j, W, k + j, tail), -c)
                    j += 1
                return out
            out = scale(MINUS_ONE, self._pair(W, k, WB, n, tail))
            add_into(out, self._pair(W, k - 1, WB, n + 1, tail), ONE)
            add_into(out, self._pair(WB, n - 1, W, k + 1, tail), ONE)
            return out
        # w_n wb_k with n > k
        if self.deformed:
            # w_n wb_k = wb_k w_n + eps sum_j (1/j)(w_{n-j} wb_{k+j} - wb_{k-j} w_{n+j})
            out = self._pair(WB, k, W, n, tail)
            j = 1
            while k + j <= td or n + j <= td:
                c = DualScalar(GAUSS_ZERO, GaussScalar(Fraction(1, j)))
                if k + j <= td:
                    add_into(out, self._pair(W, n - j, WB, k + j, tail), c)
                if n + j <= td:
                    add_into(out, self._pair(WB, k - j, W, n + j, tail), -c)
                j += 1
            return out
        out = self._pair(W, n - 1, WB, k + 1, tail)
        add_into(out, self._pair(WB, k, W, n, tail), MINUS_ONE)
        add_into(out, self._pair(WB, k - 1, W, n + 1, tail), ONE)
        return out

    def _pair(self, g1: int, m1: int, g2: int, m2: int, tail: State) -> State:
        return self.act(g1, m1, self.act(g2, m2, tail))

    # -- Phi and T ---------------------------------------------------------

    def phi(self, v: State) -> State:
        """Phi acts by i * charge on each monomial."""
        out: State = {}
        for mono, coeff in v.items():
            c = I * dual(charge(mono)) * coeff
            if not c.is_zero():
                out[mono] = c
        return out

    def t(self, v: State) -> State:
        out: State = {}
        for mono, coeff in v.items():
            add_into(out, self._t_mono(mono), coeff)
        return out

    def _t_mono(self, mono: Mono) -> State:
        hit = self._t_memo.get(mono)
        if hit is not None:
            return hit
        if not mono:
            result: State = {}
        else:
            (g, n), rest = mono[0], mono[1:]
            rest_state = unit(rest)
            result = self.act(g, n, self._t_mono(rest))
            # [T, g_n] = -n g_{n-1} -+ i g_{n-1} Phi, eps-scaled when deformed
            c_rest = dual(charge(rest))
            coeff = dual(-n) + (c_rest if g == W else -c_rest) * (
                EPS if self.deformed else ONE
            )
            add_into(result, self.act(g, n - 1, rest_state), coeff)
        self._t_memo[mono] = result
        return result


# ---------------------------------------------------------------------------
# the brute-force oracle
# ---------------------------------------------------------------------------


class OracleTable:
    """Row-reduction semantics for the vacuum module, independent of act().

    Built degree by degree.  Stage d works in the free span of formal
    creation images (g, m) . v with m <= -1 and v a certified basis monomial
    of degree d + m; every relation instance with creation indices, applied
    to a certified lower-degree tail, becomes a row over those columns after
    folding its inner factor through the already-certified lower stages
    (non-creation inner modes go through the solved evaluation tables).
    Row reduction must leave exactly the normal-monomial columns free:
    every non-normal image needs a pivot, no normal one may acquire one.
    """

    def __init__(self, max_degree: int, deformed: bool):
        self.max_degree = max_degree
        self.deformed = deformed
        self.basis: Dict[int, List[Mono]] = {0: [VACUUM]}
        self._normal_set = {VACUUM}
        # creation images (g, m, tail mono) -> reduction to the normal basis
        self._image: Dict[Tuple[int, int, Mono], State] = {}
        self._eval_memo: Dict[Tuple[int, int, Mono], State] = {}
        for d in range(1, max_degree + 1):
            self._build_stage(d)

    # -- public API --------------------------------------------------------

    def dimension(self, d: int, c: Optional[int] = None) -> int:
        if c is None:
            return len(self.basis.get(d, []))
        return sum(1 for mono in self.basis.get(d, []) if charge(mono) == c)

    def rewrite_word(self, word: Sequence[Factor]) -> State:
        """Reduce an operator word applied to the vacuum to the normal basis."""
        v: State = unit(VACUUM)
        for g, m in reversed(list(word)):
            v = self.apply(g, m, v)
        return v

    def apply(self, g: int, m: int, v: State) -> State:
        out: State = {}
        for mono, coeff in v.items():
            if m <= -1:
                d = degree(mono) - m
                if d > self.max_degree:
                    raise ValueError(
                        f"degree {d} beyond oracle bound {self.max_degree}"
                    )
                add_into(out, self._image[(g, m, mono)], coeff)
            else:
                add_into(out, self._eval_noncreation(g, m, mono), coeff)
        return out

    # -- non-creation evaluation --------------------------------------------

    def _eval_noncreation(self, g: int, b: int, mono: Mono) -> State:
        """g_b (b >= 0) applied to a normal monomial, solved from a relation."""
        if b <= -1:
            raise ValueError("creation mode passed to _eval_noncreation")
        key = (g, b, mono)
        hit = self._eval_memo.get(key)
        if hit is not None:
            return hit
        if not mono:
            result: State = {}
        else:
            result = self._solve_front(g, b, mono)
        self._eval_memo[key] = result
        return result

    def _solve_front(self, g: int, b: int, mono: Mono) -> State:
        (h, kh), tail = mono[0], mono[1:]
        tail_state = unit(tail)
        td = degree(tail)
        if g == h:
            kind = KIND_WW if g == W else KIND_WBWB
            inst = relation_instance(kind, b, kh, self.deformed, td)
        else:
            # align the wwb relation so one term is exactly (g, b)(h, kh)
            m_idx, k_idx = (b, kh) if g == W else (kh, b)
            inst = relation_instance(KIND_WWB, m_idx, k_idx, self.deformed, td)
        target_coeff = None
        rest: State = {}
        for coeff, ((g1, m1), (g2, m2)) in inst.terms:
            if (g1, m1) == (g, b) and (g2, m2) == (h, kh) and target_coeff is None:
                target_coeff = coeff
                continue
            inner = self.apply(g2, m2, tail_state)
            add_into(rest, self.apply(g1, m1, inner), coeff)
        if target_coeff is None or target_coeff.value.is_zero():
            raise OracleDefect(
                f"no solvable instance for {LETTER_NAMES[g]}_{b} {mono_str(mono)}"
            )
        return scale(-target_coeff.inv(), rest)

    # -- stage construction ---------------------------------------------------

    def _build_stage(self, d: int) -> None:
        candidates = enumerate_basis(d, None, self.deformed)
        cand_cols = set()
        columns = []
        for m in range(-d, 0):
            for v in self.basis[d + m]:
                for g in (W, WB):
                    col = (g, m, v)
                    columns.append(col)
                    if is_normal(((g, m),) + v, self.deformed):
                        cand_cols.add(col)
        if len(cand_cols) != len(candidates):
            raise OracleDefect(f"degree {d}: candidate/column mismatch")
        cells: Dict[int, List] = {}
        for col in columns:
            g, m, v = col
            cells.setdefault(charge(v) + (1 if g == W else -1), []).append(col)
        rows_by_charge: Dict[int, List] = {}
        for row in self._rows_for_degree(d):
            if row:
                col = next(iter(row))
                c = charge(col[2]) + (1 if col[0] == W else -1)
                rows_by_charge.setdefault(c, []).append(row)
        pivots_all: Dict[Tuple[int, int, Mono], Dict] = {}
        for c, cols in sorted(cells.items()):
            pivots = self._row_reduce_cell(
                d, c, cols, cand_cols, rows_by_charge.get(c, [])
            )
            missing = [
                col for col in cols if col not in cand_cols and col not in pivots
            ]
            if missing:
                g, m, v = missing[0]
                raise OracleDefect(
                    f"degree {d} charge {c}: {len(missing)} images irreducible, "
                    f"e.g. {LETTER_NAMES[g]}[{m}] . {mono_str(v)}"
                )
            hit = [col for col in cols if col in cand_cols and col in pivots]
            if hit:
                raise OracleDefect(
                    f"degree {d} charge {c}: candidate basis dependent at {hit[0]!r}"
                )
            pivots_all.update(pivots)
        # freeze the stage: candidate images are themselves, others rewrite
        for col in columns:
            g, m, v = col
            if col in cand_cols:
                self._image[col] = unit(((g, m),) + v)
            else:
                row = pivots_all[col]
                out: State = {}
                for other, coeff in row.items():
                    if other != col:
                        og, om, ov = other
                        add_into(out, unit(((og, om),) + ov), -coeff)
                self._image[col] = out
        self.basis[d] = candidates
        self._normal_set.update(candidates)

    def _rows_for_degree(self, d: int):
        rows = []
        for m in range(-d, 0):
            for k in range(-d, 0):
                e = d + m + k
                if e < 0:
                    continue
                for kind in (KIND_WW, KIND_WBWB, KIND_WWB):
                    if kind in (KIND_WW, KIND_WBWB) and m > k:
                        continue  # the relation is symmetric in (m, k)
                    for tail in self.basis[e]:
                        row = self._instance_row(kind, m, k, tail)
                        if row:
                            rows.append(row)
        return rows

    def _instance_row(self, kind: str, m: int, k: int, tail: Mono):
        inst = relation_instance(kind, m, k, self.deformed, degree(tail))
        vec: Dict[Tuple[int, int, Mono], DualScalar] = {}
        for coeff, ((g1, m1), (g2, m2)) in inst.terms:
            if m2 <= -1:
                inner = self._image[(g2, m2, tail)]
            else:
                inner = self._eval_noncreation(g2, m2, tail)
            for mono, cc in inner.items():
                col = (g1, m1, mono)
                new = vec.get(col, ZERO) + coeff * cc
                if new.is_zero():
                    vec.pop(col, None)
                else:
                    vec[col] = new
        return vec

    def _row_reduce_cell(self, d: int, c: int, cols, cand_cols, rows):
        # pivot preference: non-candidate images first, deterministic otherwise
        rank = {col: (col in cand_cols, col) for col in cols}
        pivots: Dict[Tuple[int, int, Mono], Dict] = {}
        deferred = []
        for vec in rows:
            self._insert_row(vec, pivots, rank, deferred)
        for vec in deferred:
            self._reduce_vector(vec, pivots)
            if vec:
                raise OracleDefect(
                    f"degree {d} charge {c}: eps-torsion row survives reduction"
                )
        return pivots

    def _reduce_vector(self, vec, pivots) -> None:
        while True:
            hit = None
            for col in vec:
                if col in pivots:
                    hit = col
                    break
            if hit is None:
                return
            coeff = vec.pop(hit)
            for other, c in pivots[hit].items():
                if other == hit:
                    continue
                new = vec.get(other, ZERO) - coeff * c
                if new.is_zero():
                    vec.pop(other, None)
                else:
                    vec[other] = new

    def _insert_row(self, vec, pivots, rank, deferred) -> None:
        self._reduce_vector(vec, pivots)
        if not vec:
            return
        unit_cols = [col for col, cf in vec.items() if not cf.value.is_zero()]
        if not unit_cols:
            deferred.append(vec)  # pure-eps row; must vanish once pivots complete
            return
        pivot = min(unit_cols, key=lambda col: rank[col])
        inv = vec[pivot].inv()
        row = {col: cf * inv for col, cf in vec.items()}
        for other_row in pivots.values():
            cf = other_row.get(pivot)
            if cf is not None:
                del other_row[pivot]
                for col, cc in row.items():
                    if col == pivot:
                        continue
                    new = other_row.get(col, ZERO) - cf * cc
                    if new.is_zero():
                        other_row.pop(col, None)
                    else:
                        other_row[col] = new
        pivots[pivot] = row


def oracle_reduce(max_degree: int, deformed: bool) -> OracleTable:
    """Build the row-reduction table for all degrees <= max_degree."""
    return OracleTable(max_degree, deformed)


# ---------------------------------------------------------------------------
# engine instances
# ---------------------------------------------------------------------------


class NLSInstance(engine.LogVAInstance):
    """The NLS module as a braided logVA instance.

    The braiding acts on a (charge q1, charge q2) pair as the scalar
    -q1*q2 (undeformed, semisimple) or -eps*q1*q2 (deformed, nilpotent).
    mu is grounded in the straightening action for generator left factors and
    extended to longer monomials through the Borcherds mode recursion.
    """

    def __init__(self, deformed: bool):
        self.deformed = deformed
        self.name = "nls-eps" if deformed else "nls"
        self.dual_ring = deformed
        self.algebra = NLSAlgebra(deformed)
        self._mu_memo: Dict[Tuple[Mono, int, Mono], State] = {}

    @property
    def vacuum_key(self):
        return VACUUM

    def basis(self, d: int, c: Optional[int] = None) -> List[Mono]:
        return enumerate_basis(d, c, self.deformed)

    def degree_of(self, key: Mono) -> int:
        return degree(key)

    def charge_of(self, key: Mono) -> int:
        return charge(key)

    def generator_states(self) -> Dict[str, State]:
        return {"w": unit(((W, -1),)), "wb": unit(((WB, -1),))}

    def braiding_scalar(self, qa: int, qb: int) -> DualScalar:
        s = dual(-qa * qb)
        return EPS * s if self.deformed else s

    def translate_state(self, a: State) -> State:
        return self.algebra.t(a)

    def mu(self, a: State, n: int, b: State) -> State:
        out: State = {}
        for amono, ca in a.items():
            for bmono, cb in b.items():
                add_into(out, self._mu_mono(amono, n, bmono), ca * cb)
        return out

    def _mu_mono(self, amono: Mono, n: int, bmono: Mono) -> State:
        key = (amono, n, bmono)
        hit = self._mu_memo.get(key)
        if hit is not None:
            return hit
        if not amono:
            result = unit(bmono) if n == -1 else {}
        elif len(amono) == 1 and amono[0][1] == -1:
            result = self.algebra.act(amono[0][0], n, unit(bmono))
        else:
            (g, m1), rest = amono[0], amono[1:]
            result = engine.nth_product_modes(
                self, unit(((g, -1),)), m1, unit(rest), n, unit(bmono)
            )
        self._mu_memo[key] = result
        return result

    def braiding_map(self, max_degree: int):
        """EndoMap-backed braiding on the degree-truncated basis."""
        from .braiding import BraidingMap, EndoMap

        keys = [k for d in range(max_degree + 1) for k in self.basis(d)]
        phi_action = {k: self.algebra.phi(unit(k)) for k in keys}
        phi = EndoMap(
            action=phi_action,
            degree_shift=0,
            charge_shift=0,
            spectrum=[(dual(0, 0) + I * dual(q), 1) for q in range(-max_degree, max_degree + 1)],
        )
        if self.deformed:
            eps_phi = EndoMap(
                action={k: scale(EPS, v) for k, v in phi_action.items()},
                degree_shift=0,
                charge_shift=0,
                spectrum=[(dual(0), 2)],
            )
            return BraidingMap(components=((eps_phi, phi),))
        return BraidingMap(components=((phi, phi),))


def nls_instance() -> NLSInstance:
    return NLSInstance(deformed=False)


def nls_eps_instance() -> NLSInstance:
    return NLSInstance(deformed=True)


def as_instance(deformed: bool) -> NLSInstance:
    return NLSInstance(deformed=deformed)


# convenience wrappers matching the operation-level surface


def act(letter: str, n: int, v: State, deformed: bool = False, algebra: Optional[NLSAlgebra] = None) -> State:
    alg = algebra if algebra is not None else NLSAlgebra(deformed)
    return alg.act(LETTER_NAMES.index(letter), n, v)


def phi_act(v: State) -> State:
    return NLSAlgebra(False).phi(v)


def t_act(v: State, deformed: bool = False, algebra: Optional[NLSAlgebra] = None) -> State:
    alg = algebra if algebra is not None else NLSAlgebra(deformed)
    return alg.t(v)
