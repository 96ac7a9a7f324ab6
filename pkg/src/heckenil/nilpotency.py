"""Indices of nilpotency, degree-lowering maps and the bound verifiers.

Indices are computed in a polynomial basis: the starting power (Delta^k, or
D_2^k written in F) is a coefficient vector, the operator is a certified
matrix, and iteration stops at the zero vector.  Sweeps over many k run
as one batched matrix product per step.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable

import numpy as np

from .basis import (
    DEFAULT_SLACK, F_BASIS, NEG_INF, PolyRep, d2_power_in_f, d2_to_f, delta_basis,
    f_to_d2, get_operator,
)
from .errors import BoundViolated, CeilingExceeded, HypothesisError, ResidualNonzero
from .reports import ARITHMETIC, EXACT_BASIS, CongruenceReport, NilpotencyReport

SPACES = ("delta", "f", "d2")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7):
        if n % d == 0:
            return n == d
    d = 11
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def check_admissible(p: int, ell: int, space: str = "delta"):
    """Reject (p, ell, space) combinations where T'_ell need not be nilpotent."""
    if space not in SPACES:
        raise HypothesisError(f"unknown space {space!r}")
    if not is_prime(ell):
        raise HypothesisError(f"ell={ell} is not prime")
    if space == "delta":
        if p not in (2, 3, 5, 7):
            raise HypothesisError(f"level-1 computations need p in {{2,3,5,7}}, got {p}")
        if ell == p:
            raise HypothesisError(f"ell must differ from p = {p}")
        if (ell * ell - 1) % p:
            raise HypothesisError(f"ell={ell} is not congruent to +-1 mod {p}")
    else:
        if p != 3:
            raise HypothesisError("level-4 computations need p = 3")
        if ell in (2, 3):
            raise HypothesisError("level-4 computations need ell not in {2, 3}")


def _tag(space: str, p: int):
    return delta_basis(p) if space == "delta" else F_BASIS


def start_vector(space: str, k: int) -> np.ndarray:
    """Coordinates of Delta^k (delta space) or D_2^k in F (f, d2 spaces)."""
    if space == "delta":
        v = np.zeros(k + 1, dtype=np.int64)
        v[k] = 1
        return v
    return d2_power_in_f(k).coeffs


def _report_degree(space: str, d):
    if d == NEG_INF or space != "d2":
        return d
    if d % 3:
        raise ResidualNonzero(f"F-degree {d} is not the degree of a D2-polynomial")
    return d // 3


def default_ceiling(k: int) -> int:
    return 4 * k + 4


def index_sweep(
    ks: Iterable[int],
    p: int,
    ell: int,
    space: str = "delta",
    modified: bool = True,
    slack: int = DEFAULT_SLACK,
    ceiling: Callable[[int], int] | None = None,
) -> list:
    """Nilpotency reports for every k in ``ks``, sorted by k.

    All starting vectors are iterated together; rows that reach zero are
    dropped and the working width shrinks to the largest live degree.
    """
    check_admissible(p, ell, space)
    ks = sorted(set(int(k) for k in ks))
    if not ks:
        return []
    if ks[0] < 1:
        raise ValueError("k must be positive")
    ceiling = ceiling or default_ceiling
    starts = [start_vector(space, k) for k in ks]
    K = max(len(v) for v in starts) - 1
    op = get_operator(_tag(space, p), ell, modified, slack)
    H = op.float_matrix(K)
    V = np.zeros((len(ks), K + 1), dtype=H.dtype)
    for r, v in enumerate(starts):
        V[r, : len(v)] = v
    alive = np.arange(len(ks))
    trajectories = [[] for _ in ks]
    width = K + 1
    u = 0
    while len(alive):
        u += 1
        V = np.mod(V @ H[:width, :width], p)
        nz = V != 0
        live = nz.any(axis=1)
        degs = width - 1 - np.argmax(nz[:, ::-1], axis=1)
        for r, row in enumerate(alive):
            d = int(degs[r]) if live[r] else NEG_INF
            trajectories[row].append(_report_degree(space, d))
            if live[r] and u >= ceiling(ks[row]):
                raise CeilingExceeded(
                    f"T'_{ell} mod {p} did not kill k={ks[row]} within {u} steps"
                )
        V = V[live]
        alive = alive[live]
        if len(alive):
            width = int(degs[live].max()) + 1
            V = V[:, :width]
    return [
        NilpotencyReport(p, ell, space, k, len(t), t, slack)
        for k, t in zip(ks, trajectories)
    ]


def nilpotency_index(
    k: int, p: int, ell: int, space: str = "delta", modified: bool = True,
    slack: int = DEFAULT_SLACK, ceiling: int | None = None,
) -> NilpotencyReport:
    """Least u >= 1 with f | (T'_ell)^u = 0, for f = Delta^k or D_2^k."""
    ceil_fn = (lambda _k: ceiling) if ceiling is not None else None
    return index_sweep([k], p, ell, space, modified, slack, ceil_fn)[0]


def image_poly(
    k: int, p: int, ell: int, space: str = "delta", modified: bool = True,
    slack: int = DEFAULT_SLACK, strict: bool = False,
) -> PolyRep:
    """f | T'_ell as a polynomial: in Delta (delta), in F (f) or in D_2 (d2)."""
    check_admissible(p, ell, space)
    v = start_vector(space, k)
    op = get_operator(_tag(space, p), ell, modified, slack)
    img = PolyRep(_tag(space, p), op.apply(v))
    if space == "d2":
        return f_to_d2(img, strict=strict)
    return img


def degree_lower(k: int, p: int, ell: int, space: str = "delta", modified: bool = True,
                 slack: int = DEFAULT_SLACK):
    """Degree of f | T'_ell (Delta-degree, F-degree or D_2-degree by space)."""
    return image_poly(k, p, ell, space, modified, slack).degree


# ---------------------------------------------------------------------------
# proven index bounds


def linear_bound(p: int, ell: int, k: int, space: str = "delta"):
    """The closed-form index bound, or None where only a reduction applies."""
    if space == "delta":
        if p == 3:
            return 1 + (k // 3 if ell % 3 == 1 else 2 * k // 3)
        if p == 5:
            return None if k % 5 == 0 else 1 + 2 * k // 5
        if p == 7:
            r = k % 7
            if r == 0:
                return None
            return (1 if r in (1, 3, 5) else 2) + 3 * k // 7
        return None
    if math.gcd(k, 6) == 1:
        return 1 + k // 3
    return None


def reductions(p: int, k: int, space: str = "delta") -> list:
    """(space, k') pairs whose index bounds the index at k."""
    out = []
    if space == "delta":
        if p in (5, 7) and k % p == 0:
            out.append(("delta", k // p))
    else:
        if k % 3 == 0:
            out.append((space, k // 3))
        if k % 2 == 0:
            out.append(("delta", k // 2))
    return out


_FIVE_EIGHTH = {181, 241}
_FIVE_SIXTH = {61, 71, 251, 601}


def remark_bound(p: int, ell: int, k: int):
    """Sharper bounds for ell = 1 mod p (p = 5 with ell <= 1000, and p = 7)."""
    if p == 5 and ell % 5 == 1 and ell <= 1000:
        if ell in _FIVE_EIGHTH:
            return 1 + k // 8
        if ell in _FIVE_SIXTH:
            return 1 + k // 6
        return 1 + k // 4
    if p == 7 and ell % 7 == 1:
        r = k % 7
        if r in (3, 5):
            return 3 * k // 7
        if r == 6:
            return 1 + 3 * k // 7
    return None


def _closure(ks, p, space):
    need = {(space, k) for k in ks}
    todo = list(need)
    while todo:
        sp, k = todo.pop()
        for red in reductions(p, k, sp):
            if red not in need:
                need.add(red)
                todo.append(red)
    return need


def compute_indices(ks, p, ell, space="delta", slack=DEFAULT_SLACK) -> Dict[tuple, int]:
    """Indices for ks and every exponent their reductions refer to."""
    need = _closure(ks, p, space)
    out = {}
    for sp in {s for s, _ in need}:
        sub = [k for s, k in need if s == sp]
        for rep in index_sweep(sub, p, ell, sp, slack=slack):
            out[(sp, rep.k)] = rep.index
    return out


def verify_thm13(ks, p: int, ell: int, space: str = "delta", slack: int = DEFAULT_SLACK,
                 include_remark: bool = True, strict: bool = False) -> list:
    """Compare computed indices with the proven bounds.

    Returns the main report and, where a sharper remark bound exists for
    (p, ell), a second report for it.  ``strict`` raises BoundViolated on
    the first violation of the main bound.
    """
    ks = sorted(set(int(k) for k in ks))
    check_admissible(p, ell, space)
    if space == "delta" and p not in (3, 5, 7):
        raise HypothesisError("index bounds are stated for p in {3, 5, 7}")
    sp = "d2" if space in ("f", "d2") else "delta"
    idx = compute_indices(ks, p, ell, sp, slack)
    main = CongruenceReport(
        "thm1_3", {"p": p, "ell": ell, "space": sp, "k_min": ks[0] if ks else None,
                   "k_max": ks[-1] if ks else None},
        rigor=EXACT_BASIS,
    )
    slacks = []
    for k in ks:
        n = idx[(sp, k)]
        bounds = []
        lin = linear_bound(p, ell, k, sp)
        if lin is not None:
            bounds.append(("linear", lin))
        for rsp, rk in reductions(p, k, sp):
            bounds.append((f"N({'D2' if rsp != 'delta' else 'Delta'}^{rk})", idx[(rsp, rk)]))
        for rule, b in bounds:
            main.checked += 1
            slacks.append(b - n)
            if n > b:
                main.failures.append({"k": k, "index": n, "bound": b, "rule": rule})
    if slacks:
        main.notes["max_slack"] = max(slacks)
        main.notes["min_slack"] = min(slacks)
    reports = [main]
    if include_remark and sp == "delta" and any(remark_bound(p, ell, k) is not None for k in ks):
        rem = CongruenceReport("thm1_3_remark", dict(main.params), rigor=EXACT_BASIS)
        for k in ks:
            b = remark_bound(p, ell, k)
            if b is None:
                continue
            rem.checked += 1
            n = idx[(sp, k)]
            if n > b:
                rem.failures.append({"k": k, "index": n, "bound": b, "rule": "remark"})
        reports.append(rem)
    if strict and main.failures:
        w = main.failures[0]
        raise BoundViolated(f"index {w['index']} exceeds bound {w['bound']} at k={w['k']}", w["k"])
    return reports


def index_table(ks, p, ell, space="delta", slack=DEFAULT_SLACK) -> list:
    """Rows (k, index, bound) with the bound resolved through reductions."""
    sp = "d2" if space in ("f", "d2") else "delta"
    idx = compute_indices(ks, p, ell, sp, slack)
    rows = []
    for k in sorted(set(ks)):
        cands = []
        lin = linear_bound(p, ell, k, sp)
        if lin is not None:
            cands.append(lin)
        cands += [idx[r] for r in reductions(p, k, sp)]
        if sp == "delta":
            rb = remark_bound(p, ell, k)
        else:
            rb = None
        bound = min(cands) if cands else None
        rows.append((k, idx[(sp, k)], bound, rb))
    return rows


# ---------------------------------------------------------------------------
# Conjectures: degree-lowering maps and their S-indices


@dataclass(frozen=True)
class ConjectureParams:
    """One modified degree map together with its conjectured digit sequence."""

    variant: str
    p: int
    ell: int
    space: str
    seeds: tuple
    recurrence: tuple
    alpha: float
    base: int
    first_digit: int
    residue_mod: int

    def term(self, t: int) -> int:
        """Conjectured value of the t-th sequence term."""
        seeds = dict(self.seeds)
        if t in seeds:
            return seeds[t]
        lo = min(seeds)
        if t < lo:
            raise ValueError(f"sequence starts at t={lo}")
        vals = dict(seeds)
        for i in range(lo, t + 1):
            if i not in vals:
                vals[i] = sum(c * vals[i - 1 - j] for j, c in enumerate(self.recurrence))
        return vals[t]

    def probe(self, t: int) -> int:
        """The exponent whose S-index minus one defines the t-th term."""
        if self.variant in ("S19_PRIME", "D19_TABLE"):
            return 5 ** t + 1
        return 2 * self.base ** t + 1

    def admissible(self, k: int) -> bool:
        if self.p == 3:
            return math.gcd(k, 6) == 1
        return k % self.p != 0

    def excluded(self, k: int) -> bool:
        """Exponents where the digit formula is not claimed."""
        if self.variant != "S_TRIPLE(11)":
            return False
        if k % 54 in (7, 11):
            return True
        m = 4 * k - 1
        e = 0
        while m > 1 and m % 3 == 0:
            m //= 3
            e += 1
        return m == 1 and e % 2 == 1

    @property
    def first_term(self) -> int:
        return 0 if self.base == 5 else 1


S19_PRIME = ConjectureParams(
    "S19_PRIME", 5, 19, "delta", ((0, 0), (1, 2)), (3, 2),
    math.log((3 + math.sqrt(17)) / 2, 5), 5, 2, 25,
)
D19_TABLE = ConjectureParams(
    "D19_TABLE", 5, 19, "delta", ((0, 0), (1, 2)), (3, 2),
    math.log((3 + math.sqrt(17)) / 2, 5), 5, 2, 25,
)
S29_DOUBLE = ConjectureParams(
    "S29_DOUBLE", 7, 29, "delta", ((1, 3), (2, 16)), (5, 2),
    math.log((5 + math.sqrt(33)) / 2, 7), 7, 2, 98,
)
S_TRIPLE_7 = ConjectureParams(
    "S_TRIPLE(7)", 3, 7, "d2", ((1, 1), (2, 2)), (1, 2), math.log(2, 3), 3, 3, 54,
)
S_TRIPLE_11 = ConjectureParams(
    "S_TRIPLE(11)", 3, 11, "d2", ((2, 2),), (2,), math.log(2, 3), 3, 3, 54,
)

VARIANTS = {c.variant: c for c in (S19_PRIME, D19_TABLE, S29_DOUBLE, S_TRIPLE_7, S_TRIPLE_11)}


def get_params(variant) -> ConjectureParams:
    if isinstance(variant, ConjectureParams):
        return variant
    key = str(variant).upper().replace("_7", "(7)").replace("_11", "(11)")
    if key not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}")
    return VARIANTS[key]


def _degree_skipping(img: PolyRep, p: int):
    # highest term whose degree is neither divisible by 7 nor 5 mod 98
    for d in sorted(img.terms(), reverse=True):
        if d % p != 0 and d % 98 != 5:
            return d
    return NEG_INF


class DegreeMap:
    """Memoized modified degree map and S-index for one variant."""

    def __init__(self, params: ConjectureParams, slack: int = DEFAULT_SLACK):
        self.params = params
        self.slack = slack
        self._lock = threading.Lock()
        self._md: Dict[int, object] = {}
        self._s: Dict[int, int] = {}

    def prepare(self, kmax: int):
        """Build the operator matrix once for all exponents up to kmax."""
        p = self.params
        K = kmax if p.space == "delta" else 3 * kmax
        get_operator(_tag(p.space, p.p), p.ell, True, self.slack).matrix(K)

    def image(self, k: int) -> PolyRep:
        # the iteration leaves the gcd(k, 6) = 1 span once E - 1 is taken
        p = self.params
        return image_poly(k, p.p, p.ell, p.space, True, self.slack, strict=False)

    def raw_degree(self, k: int):
        return self.image(k).degree if k > 0 else NEG_INF

    def modified_degree(self, k: int):
        with self._lock:
            if k in self._md:
                return self._md[k]
        prm = self.params
        if k <= 0:
            val = NEG_INF
        else:
            img = self.image(k)
            d = img.degree
            if d == NEG_INF:
                val = NEG_INF
            elif prm.variant == "S29_DOUBLE":
                val = d if (d % 7 and d % 98 != 5) else _degree_skipping(img, 7)
            else:
                val = d - 1 if d % prm.p == 0 else d
        with self._lock:
            self._md[k] = val
        return val

    def s_index(self, k: int) -> int:
        path = []
        cur = k
        while True:
            with self._lock:
                known = self._s.get(cur)
            if known is not None:
                base = known
                break
            path.append(cur)
            nxt = self.modified_degree(cur)
            if nxt == NEG_INF:
                base = 0
                break
            cur = nxt
        with self._lock:
            for steps, kk in enumerate(reversed(path), start=1):
                self._s[kk] = base + steps
        return base + len(path)


_MAPS: Dict[tuple, DegreeMap] = {}
_MAPS_LOCK = threading.Lock()


def degree_map(variant, slack: int = DEFAULT_SLACK) -> DegreeMap:
    params = get_params(variant)
    key = (params.variant, slack)
    with _MAPS_LOCK:
        if key not in _MAPS:
            _MAPS[key] = DegreeMap(params, slack)
        return _MAPS[key]


def modified_degree(k: int, variant, slack: int = DEFAULT_SLACK):
    return degree_map(variant, slack).modified_degree(k)


def s_index(k: int, variant, slack: int = DEFAULT_SLACK) -> int:
    return degree_map(variant, slack).s_index(k)


def table2_degree(k: int):
    """Closed form for the Delta-degree of Delta^k | T_19 mod 5, or None if undefined."""
    if k % 5 == 0:
        return None
    j = k % 5
    if j in (1, 2):
        if k == j:
            return None
        v = 0
        m = k - j
        while m % 5 == 0:
            m //= 5
            v += 1
        return k - (5 ** v + 1) // 3 if v % 2 else k - (5 ** v + 5) // 3
    r = k % 25
    if r == 13:
        return k - 3
    if r == 14:
        return k - 4
    return k - 2


def _digits(k: int, base: int) -> list:
    out = []
    while k:
        out.append(k % base)
        k //= base
    return out


def _seq_value(params: ConjectureParams, computed: dict, t: int) -> int:
    return computed.get(t, params.term(t))


def verify_table2(kmax: int, slack: int = DEFAULT_SLACK) -> CongruenceReport:
    rep = CongruenceReport("table2", {"k_max": kmax}, rigor=EXACT_BASIS)
    dm = degree_map(D19_TABLE, slack)
    dm.prepare(kmax)
    skipped = []
    for k in range(1, kmax + 1):
        if k % 5 == 0:
            continue
        pred = table2_degree(k)
        if pred is None:
            skipped.append({"k": k, "computed": dm.raw_degree(k)})
            continue
        rep.checked += 1
        got = dm.raw_degree(k)
        if got != pred:
            rep.failures.append({"k": k, "computed": got, "predicted": pred})
    rep.notes["formula_not_applicable"] = skipped
    return rep


def _sequence_report(params, dm, kmax, name):
    rep = CongruenceReport(name, {"variant": params.variant, "k_max": kmax}, rigor=EXACT_BASIS)
    computed = {}
    t = params.first_term
    while params.probe(t) <= kmax:
        val = dm.s_index(params.probe(t)) - 1
        computed[t] = val
        try:
            pred = params.term(t)
        except ValueError:
            pred = None
        if pred is not None:
            rep.checked += 1
            if pred != val:
                rep.failures.append({"t": t, "computed": val, "predicted": pred})
        t += 1
    rep.notes["computed"] = computed
    return rep, computed


def _growth_report(params, svals, name):
    rep = CongruenceReport(name, {"variant": params.variant, "alpha": params.alpha}, rigor=ARITHMETIC)
    if not svals:
        return rep
    ks = np.array(sorted(svals))
    ratios = np.array([svals[k] / k ** params.alpha for k in ks])
    rep.checked = len(ks)
    half = ks >= ks[-1] // 2
    rep.notes["max_ratio"] = float(ratios.max())
    rep.notes["max_ratio_upper_half"] = float(ratios[half].max())
    rep.notes["argmax_k"] = int(ks[int(ratios.argmax())])
    return rep


def _index_le_s(params, dm, kmax, slack, name):
    rep = CongruenceReport(name, {"variant": params.variant, "k_max": kmax}, rigor=EXACT_BASIS)
    ks = [k for k in range(1, kmax + 1) if params.admissible(k)]
    for r in index_sweep(ks, params.p, params.ell, params.space, slack=slack):
        s = dm.s_index(r.k)
        rep.checked += 1
        if r.index > s:
            rep.failures.append({"k": r.k, "index": r.index, "s_index": s,
                                 "excluded_class": params.excluded(r.k)})
    return rep


def _digit_table(params, dm, kmax, seq):
    """Per-digit contributions (S(k) - S(s)) / seq_i for k with one high digit."""
    b, i0, M = params.base, params.first_digit, params.residue_mod
    table = {}
    i = i0
    while b ** i <= kmax:
        for a in range(1, b):
            vals = {}
            for r in range(1, b ** i0):
                k = r + a * b ** i
                if k > kmax or not params.admissible(k) or params.excluded(k):
                    continue
                s = k % M
                if s == 0 or not params.admissible(s):
                    continue
                diff = dm.s_index(k) - dm.s_index(s)
                y = seq.get(i, params.term(i))
                vals[r] = diff / y if y else None
            if vals:
                table[(i, a)] = vals
        i += 1
    return table


def _fit_parity(table, base):
    """Least-squares (alpha, beta) with x(a) = alpha*floor(a/2) + beta*floor((a+base)/2)."""
    fits = {}
    by_i = {}
    for (i, a), vals in table.items():
        modal = max(set(vals.values()), key=list(vals.values()).count)
        by_i.setdefault(i, {})[a] = modal
    for i, xs in by_i.items():
        for parity in (0, 1):
            pts = [(a, x) for a, x in xs.items() if a % 2 == parity and x is not None]
            if len(pts) < 2:
                continue
            A = np.array([[a // 2, (a + base) // 2] for a, _ in pts], dtype=float)
            y = np.array([x for _, x in pts], dtype=float)
            coef, *_ = np.linalg.lstsq(A, y, rcond=None)
            resid = float(np.abs(A @ coef - y).max())
            fits[f"i={i},parity={parity}"] = {
                "alpha": float(coef[0]), "beta": float(coef[1]), "max_residual": resid,
                "x": {int(a): x for a, x in pts},
            }
    return fits, by_i


def verify_conjectures(kmax: int, variant, slack: int = DEFAULT_SLACK) -> list:
    """Report-only checks of the conjectured degree and S-index formulas."""
    params = get_params(variant)
    if params.variant == "D19_TABLE":
        return [verify_table2(kmax, slack)]
    dm = degree_map(params, slack)
    dm.prepare(kmax)
    reports = []
    seq_rep, seq = _sequence_report(params, dm, kmax, "sequence")
    reports.append(seq_rep)
    svals = {}
    span = CongruenceReport("d2_span", {"variant": params.variant, "k_max": kmax}, rigor=EXACT_BASIS)
    for k in range(1, kmax + 1):
        if not params.admissible(k):
            continue
        try:
            svals[k] = dm.s_index(k)
            if params.space == "d2":
                span.checked += 1
                f_to_d2(d2_to_f(dm.image(k)), strict=True)
        except ResidualNonzero as exc:
            span.failures.append({"k": k, "error": str(exc)})
    if params.space == "d2":
        reports.append(span)
    if params.variant == "S19_PRIME":
        digit = CongruenceReport("digit_formula", {"variant": params.variant, "k_max": kmax},
                                 rigor=EXACT_BASIS)
        for k, sv in svals.items():
            dg = _digits(k, 5)
            s = k % 25
            pred = svals.get(s, dm.s_index(s)) + sum(
                a * params.term(i) for i, a in enumerate(dg) if i >= 2
            )
            digit.checked += 1
            if pred != sv:
                digit.failures.append({"k": k, "computed": sv, "predicted": pred})
        reports.append(digit)
    else:
        table = _digit_table(params, dm, kmax, seq)
        fit = CongruenceReport("digit_fit", {"variant": params.variant, "k_max": kmax},
                               rigor=EXACT_BASIS)
        fit.checked = sum(len(v) for v in table.values())
        fits, modal = _fit_parity(table, params.base)
        exceptions = [
            {"i": i, "a": a, "r": r, "value": v}
            for (i, a), vals in table.items() for r, v in vals.items()
            if v != modal[i][a]
        ]
        fit.notes = {"modal_contribution": {f"{i},{a}": v for i, d in modal.items() for a, v in d.items()},
                     "exceptions": exceptions}
        if params.base == 7:
            fit.notes["parity_fits"] = fits
        reports.append(fit)
    reports.append(_growth_report(params, svals, "growth"))
    reports.append(_index_le_s(params, dm, kmax, slack, "index_le_s"))
    return reports


# ---------------------------------------------------------------------------
# Nicolas-Serre formula and the crossover arithmetic


def ns_formula(k: int) -> int:
    """1 + n_3(k) + n_5(k) from the binary digits of odd k."""
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be a positive odd integer")
    bits = _digits(k, 2)
    n3 = sum(b << i for i, b in enumerate(bits[1::2]))
    n5 = sum(b << i for i, b in enumerate(bits[2::2]))
    return 1 + n3 + n5


@dataclass(frozen=True)
class BoundRow:
    p: int
    ell: int
    c: float
    alpha: float

    def value(self, k: float) -> float:
        return self.c * math.exp(self.alpha * math.log(k)) if k > 0 else 0.0


BOUND_TABLE = (
    BoundRow(2, 3, 3.0, 0.5),
    BoundRow(2, 5, 7 / 3, 2 / 3),
    BoundRow(3, 2, 4.0, math.log(2, 3)),
    BoundRow(3, 7, 3.2, math.log(6, 9)),
    BoundRow(5, 19, 138 / 11, math.log(23, 25)),
    BoundRow(5, 11, 6.3, math.log(21, 25)),
    BoundRow(7, 13, 564 / 23, math.log(47, 49)),
    BoundRow(7, 29, 564 / 23, math.log(47, 49)),
)


@dataclass(frozen=True)
class CrossoverRange:
    label: str
    row: tuple
    threshold: float
    linear: Callable[[int], int] = field(compare=False)


CROSSOVERS = (
    CrossoverRange("p=3, ell=1 mod 3", (3, 7), 2.1e5, lambda k: 1 + k // 3),
    CrossoverRange("p=5, ell=-1 mod 5", (5, 19), 5.86e57, lambda k: 1 + 2 * k // 5),
    CrossoverRange("p=5, ell=1 mod 5", (5, 11), 1.27e22, lambda k: 1 + 2 * k // 5),
    CrossoverRange("p=7, ell=+-1 mod 7", (7, 13), 1.36e164, lambda k: 2 + 3 * k // 7),
)


def _exact_crossover(rng: CrossoverRange, row: BoundRow) -> float:
    # smallest k (located in log space) where the linear bound reaches c k^alpha
    def ahead(logk):
        k = int(math.exp(logk))
        return rng.linear(k) >= row.value(k)

    lo, hi = math.log(rng.threshold) - 5, math.log(rng.threshold) + 5
    for _ in range(200):
        mid = (lo + hi) / 2
        if ahead(mid):
            hi = mid
        else:
            lo = mid
    return math.exp(hi)


def crossover_check(table=BOUND_TABLE, samples: int = 10) -> CongruenceReport:
    """Linear index bounds against c k^alpha around the stated thresholds.

    Below each threshold the samples are k = T^(i/samples), i = 0..samples-1,
    where the linear bound must be strictly smaller; above, k = T * 10^j for
    j = 1..samples, where it must be strictly larger.
    """
    rows = {(r.p, r.ell): r for r in table}
    rep = CongruenceReport("crossover", {"samples": samples}, rigor=ARITHMETIC)
    for rng in CROSSOVERS:
        row = rows[rng.row]
        below = [int(math.exp(i / samples * math.log(rng.threshold))) for i in range(samples)]
        above = [int(rng.threshold) * 10 ** j for j in range(1, samples + 1)]
        for k in below:
            rep.checked += 1
            lin, power = rng.linear(k), row.value(k)
            if not float(lin) < power:
                rep.failures.append({"range": rng.label, "k": k, "side": "below",
                                     "linear": float(lin), "power": power})
        for k in above:
            rep.checked += 1
            lin, power = rng.linear(k), row.value(k)
            if not float(lin) > power:
                rep.failures.append({"range": rng.label, "k": k, "side": "above",
                                     "linear": float(lin), "power": power})
        cross = _exact_crossover(rng, row)
        rep.notes[rng.label] = {"stated": rng.threshold, "computed": cross,
                                "ratio": cross / rng.threshold}
    return rep


__all__ = [
    "NEG_INF", "SPACES", "check_admissible", "index_sweep", "nilpotency_index",
    "image_poly", "degree_lower", "linear_bound", "remark_bound", "reductions",
    "compute_indices", "verify_thm13", "index_table", "ConjectureParams", "S19_PRIME",
    "D19_TABLE", "S29_DOUBLE", "S_TRIPLE_7", "S_TRIPLE_11", "get_params", "DegreeMap",
    "degree_map", "modified_degree", "s_index", "table2_degree", "verify_table2",
    "verify_conjectures", "ns_formula", "BoundRow", "BOUND_TABLE", "crossover_check",
    "is_prime", "default_ceiling",
]
