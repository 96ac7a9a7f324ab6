"""Polynomial representations of forms mod p and the Hecke action on them.

At level 1 every form of weight divisible by p-1 is a polynomial in Delta
over F_p (p <= 7).  At level 4 mod 3 the relevant algebra is F_3[F], with
D_2 = F - F^3.  Each uniformizer X (Delta, F or D_2) starts q + O(q^2), so
the expansions of X^0, X^1, ... form a unitriangular system: converting a
q-series to a polynomial is back substitution, and the residual on a few
extra coefficients certifies the answer.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .errors import HypothesisError, PrecisionError, ResidualNonzero
from .hecke import HeckeSpec, ell_power, hecke_T, u_op
from .series import (
    A_FORM, DELTA, F_FORM, G_FORM, P_FORM, THETA_BIG, QSeries, _FixedMultiplier,
    _inverse, d_delta, named_form,
)

NEG_INF = -math.inf
DEFAULT_SLACK = 16

_KIND_NAMES = {"delta": "DELTA_BASIS", "f": "F_BASIS", "d2": "D2_SPAN"}
_GEN_WEIGHT = {"delta": 12, "f": 2, "d2": 6}


@dataclass(frozen=True)
class BasisTag:
    """Which polynomial algebra a representation lives in."""

    kind: str
    p: int

    def __post_init__(self):
        if self.kind not in _KIND_NAMES:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.kind == "delta" and self.p not in (2, 3, 5, 7):
            raise HypothesisError(f"the Delta basis needs p in {{2,3,5,7}}, got {self.p}")
        if self.kind in ("f", "d2") and self.p != 3:
            raise HypothesisError("the level-4 bases exist only for p = 3")

    @property
    def generator_weight(self) -> int:
        return _GEN_WEIGHT[self.kind]

    @property
    def level(self) -> int:
        return 1 if self.kind == "delta" else 4

    def __str__(self):
        name = _KIND_NAMES[self.kind]
        return f"{name}({self.p})" if self.kind == "delta" else name


def delta_basis(p: int) -> BasisTag:
    return BasisTag("delta", p)


F_BASIS = BasisTag("f", 3)
D2_SPAN = BasisTag("d2", 3)


def degree_of(coeffs: np.ndarray):
    """Largest index with a nonzero entry, or NEG_INF."""
    nz = np.flatnonzero(coeffs)
    return int(nz[-1]) if len(nz) else NEG_INF


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1] if len(nz) else c[:0]


@dataclass(frozen=True, eq=False)
class PolyRep:
    """Polynomial sum a_i X^i in the uniformizer X of ``basis``."""

    basis: BasisTag
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64) % self.basis.p
        c = _trim(c).copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, basis: BasisTag, i: int, c: int = 1) -> "PolyRep":
        v = np.zeros(i + 1, dtype=np.int64)
        v[i] = c
        return cls(basis, v)

    @classmethod
    def zero(cls, basis: BasisTag) -> "PolyRep":
        return cls(basis, np.zeros(0, dtype=np.int64))

    @classmethod
    def from_terms(cls, basis: BasisTag, terms: Dict[int, int]) -> "PolyRep":
        if not terms:
            return cls.zero(basis)
        v = np.zeros(max(terms) + 1, dtype=np.int64)
        for i, a in terms.items():
            v[i] += a
        return cls(basis, v)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if len(self.coeffs) else NEG_INF

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def terms(self) -> Dict[int, int]:
        return {int(i): int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs)}

    def is_homogeneous(self) -> bool:
        return len(np.flatnonzero(self.coeffs)) <= 1

    def padded(self, n: int) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[: len(self.coeffs)] = self.coeffs
        return v

    def _check(self, other):
        if other.basis != self.basis:
            raise ValueError(f"cannot combine {self.basis} and {other.basis}")

    def __eq__(self, other):
        if not isinstance(other, PolyRep):
            return NotImplemented
        return self.basis == other.basis and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyRep(self.basis, self.padded(n) + other.padded(n))

    def __neg__(self):
        return PolyRep(self.basis, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyRep):
            self._check(other)
            if self.is_zero() or other.is_zero():
                return PolyRep.zero(self.basis)
            return PolyRep(self.basis, np.convolve(self.coeffs, other.coeffs) % self.basis.p)
        if isinstance(other, (int, np.integer)):
            return PolyRep(self.basis, self.coeffs * int(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PolyRep":
        result = PolyRep.monomial(self.basis, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __repr__(self):
        parts = []
        for i, a in self.terms().items():
            mono = "1" if i == 0 else ("X" if i == 1 else f"X^{i}")
            parts.append(mono if a == 1 else f"{a}*{mono}")
        return f"PolyRep({self.basis}: {' + '.join(parts) or '0'})"


# ---------------------------------------------------------------------------
# expansions of uniformizer powers

_UNIFORMIZER_FORMS = {"delta": DELTA, "f": F_FORM, "d2": d_delta(2)}


class PowerBasis:
    """Cached expansions of X^0..X^d for one uniformizer X = q + O(q^2)."""

    def __init__(self, tag: BasisTag):
        self.tag = tag
        self._lock = threading.RLock()
        self._x = np.zeros(0, dtype=np.int64)
        self._rows = np.zeros((0, 0), dtype=np.int64)
        self._inv = np.zeros((0, 0), dtype=np.int64)

    @property
    def p(self) -> int:
        return self.tag.p

    def uniformizer(self, n: int) -> np.ndarray:
        with self._lock:
            if len(self._x) < n:
                size = max(n, 2 * len(self._x))
                form = _UNIFORMIZER_FORMS[self.tag.kind]
                self._x = named_form(form, self.p, size).coeffs
            return self._x[:n]

    def expansions(self, d: int, n: int) -> np.ndarray:
        """Array whose row i holds the first n coefficients of X^i, 0 <= i <= d."""
        with self._lock:
            cd, cn = self._rows.shape[0] - 1, self._rows.shape[1]
            if d > cd or n > cn:
                nd = max(d, 2 * cd) if d > cd else cd
                nn = max(n, cn, nd + 1 + DEFAULT_SLACK)
                x = self.uniformizer(nn)
                mult = _FixedMultiplier(x, self.p, nn)
                rows = np.zeros((nd + 1, nn), dtype=np.int64)
                cur = np.zeros(nn, dtype=np.int64)
                cur[0] = 1
                rows[0] = cur
                for i in range(1, nd + 1):
                    cur = mult(cur)
                    rows[i] = cur
                rows.setflags(write=False)
                self._rows = rows
            return self._rows[: d + 1, :n]

    def inverse_matrix(self, d: int) -> np.ndarray:
        """Matrix R with q^n = sum_j R[n, j] X^j for n, j <= d.

        Uses the residue formula [X^j] q^n = [q^(j-n)] X'(q) u(q)^(-j-1)
        with X = q u(q); it is valid in every characteristic.
        """
        with self._lock:
            if self._inv.shape[0] > d:
                return self._inv[: d + 1, : d + 1]
            nd = max(d, 2 * (self._inv.shape[0] - 1))
            p = self.p
            x = self.uniformizer(nd + 2)
            u_inv = _inverse(x[1: nd + 2], p, nd + 1)
            dx = (np.arange(1, nd + 2) * x[1: nd + 2]) % p
            mult = _FixedMultiplier(u_inv, p, nd + 1)
            inv = np.zeros((nd + 1, nd + 1), dtype=np.int64)
            w = dx[: nd + 1]
            for j in range(nd + 1):
                w = mult(w)
                inv[: j + 1, j] = w[j::-1]
            inv.setflags(write=False)
            self._inv = inv
            return inv[: d + 1, : d + 1]


_BASES: Dict[BasisTag, PowerBasis] = {}
_BASES_LOCK = threading.Lock()


def power_basis(tag: BasisTag) -> PowerBasis:
    with _BASES_LOCK:
        if tag not in _BASES:
            _BASES[tag] = PowerBasis(tag)
        return _BASES[tag]


def basis_q_matrix(tag: BasisTag, d: int, N: int) -> list:
    """q-expansions of the basis powers X^0, ..., X^d to precision N."""
    if N < d + 1:
        raise PrecisionError(f"precision {N} cannot separate degrees up to {d}")
    rows = power_basis(tag).expansions(d, N)
    w = tag.generator_weight
    return [QSeries(tag.p, rows[i], w * i, tag.level) for i in range(d + 1)]


def _coprime_to_six(j: int) -> bool:
    return math.gcd(j, 6) == 1


def to_poly(f: QSeries, tag: BasisTag, d: int, slack: int = DEFAULT_SLACK) -> PolyRep:
    """Write f as a polynomial of degree <= d in the uniformizer of ``tag``.

    Back substitution fixes the coefficients from q^0..q^d; the remaining
    ``slack`` coefficients must then vanish, otherwise f is not in the span.
    """
    if f.p != tag.p:
        raise HypothesisError(f"series is mod {f.p} but basis is mod {tag.p}")
    n = d + 1 + slack
    if f.precision < n:
        raise PrecisionError(f"need precision {n}, series has {f.precision}")
    p = tag.p
    rows = power_basis(tag).expansions(d, n)
    r = f.coeffs[:n].copy()
    a = np.zeros(d + 1, dtype=np.int64)
    for i in range(d + 1):
        if r[i]:
            a[i] = r[i]
            r = (r - r[i] * rows[i]) % p
    if r.any():
        bad = int(np.flatnonzero(r)[0])
        raise ResidualNonzero(f"series is not a polynomial of degree <= {d} in {tag}: residual at q^{bad}")
    out = PolyRep(tag, a)
    if tag.kind == "d2":
        stray = [j for j in out.terms() if not _coprime_to_six(j)]
        if stray:
            raise ResidualNonzero(f"D2 exponents {stray} are not coprime to 6")
    return out


def expand(P: PolyRep, N: int) -> QSeries:
    """q-expansion of a polynomial representation to precision N."""
    tag = P.basis
    w = tag.generator_weight * P.degree if P.is_homogeneous() and not P.is_zero() else None
    if P.is_zero():
        return QSeries.zero(tag.p, N, None, tag.level)
    rows = power_basis(tag).expansions(P.degree, N)
    c = (P.coeffs @ rows) % tag.p
    return QSeries(tag.p, c, w, tag.level)


# ---------------------------------------------------------------------------
# F_3[F] and the D_2 powers inside it


class _D2Powers:
    """(F - F^3)^j as F-polynomials over F_3, grown on demand."""

    def __init__(self):
        self._lock = threading.Lock()
        self._pows = [np.array([1], dtype=np.int64)]

    def get(self, j: int) -> np.ndarray:
        with self._lock:
            step = np.array([0, 1, 0, 2], dtype=np.int64)
            while len(self._pows) <= j:
                self._pows.append(np.convolve(self._pows[-1], step) % 3)
            return self._pows[j]


_D2_POWERS = _D2Powers()


def d2_power_in_f(k: int) -> PolyRep:
    """D_2^k written in the F basis."""
    return PolyRep(F_BASIS, _D2_POWERS.get(k))


def d2_to_f(P: PolyRep) -> PolyRep:
    if P.basis != D2_SPAN:
        raise ValueError("expected a D2 representation")
    acc = np.zeros(3 * max(P.degree, 0) + 1, dtype=np.int64) if not P.is_zero() else np.zeros(0, dtype=np.int64)
    for j, a in P.terms().items():
        pw = _D2_POWERS.get(j)
        acc[: len(pw)] += a * pw
    return PolyRep(F_BASIS, acc)


def f_to_d2(P: PolyRep, strict: bool = True) -> PolyRep:
    """Rewrite an F-polynomial as a polynomial in D_2 = F - F^3.

    D_2^j has leading term (-1)^j F^(3j), so top-down elimination decides
    membership exactly.  With ``strict`` only exponents coprime to 6 are
    accepted.
    """
    if P.basis != F_BASIS:
        raise ValueError("expected an F-basis representation")
    g = P.coeffs.copy()
    out = np.zeros(len(g) // 3 + 1, dtype=np.int64)
    while True:
        nz = np.flatnonzero(g)
        if not len(nz):
            break
        e = int(nz[-1])
        if e % 3:
            raise ResidualNonzero(f"F-polynomial of degree {e} is not a polynomial in D2")
        j = e // 3
        a = int(g[e]) * (1 if j % 2 == 0 else 2) % 3
        out[j] = a
        pw = _D2_POWERS.get(j)
        g[: len(pw)] = (g[: len(pw)] - a * pw) % 3
    res = PolyRep(D2_SPAN, out)
    if strict:
        stray = [j for j in res.terms() if not _coprime_to_six(j)]
        if stray:
            raise ResidualNonzero(f"D2 exponents {stray} are not coprime to 6")
    return res


def w_span_decompose(P: PolyRep, which: int) -> dict:
    """Coordinates of an F-polynomial in W_1 or W_5.

    W_1 is spanned by D2^k (k = 1 mod 6) and D2^i F^3 (i = 4 mod 6); W_5 by
    D2^k (k = 5 mod 6) and D2^i F^3 (i = 2 mod 6).  Raises ResidualNonzero
    when P lies outside.
    """
    if which not in (1, 5):
        raise ValueError("which must be 1 or 5")
    pure_res, mixed_res = (1, 4) if which == 1 else (5, 2)
    g = P.coeffs.copy()
    coords = {}
    while True:
        nz = np.flatnonzero(g)
        if not len(nz):
            return coords
        e = int(nz[-1])
        if e % 3 == 0 and (e // 3) % 6 == pure_res:
            j = e // 3
            gen, key = _D2_POWERS.get(j), ("D2", j)
        elif e % 3 == 0 and e >= 3 and (e // 3 - 1) % 6 == mixed_res:
            j = e // 3 - 1
            gen = np.zeros(3 * j + 4, dtype=np.int64)
            gen[3:] = _D2_POWERS.get(j)
            key = ("D2F3", j)
        else:
            raise ResidualNonzero(f"leading F-degree {e} does not occur in W_{which}")
        a = int(g[e]) * int(gen[-1]) % 3  # leading coefficient is +-1, its own inverse
        coords[key] = a
        g[: len(gen)] = (g[: len(gen)] - a * gen) % 3


def in_w_span(P: PolyRep, which: int) -> bool:
    try:
        w_span_decompose(P, which)
    except ResidualNonzero:
        return False
    return True


# ---------------------------------------------------------------------------
# Hecke operators as matrices on X^0..X^K


def _check_operator(tag: BasisTag, ell: int, modified: bool):
    p = tag.p
    if ell == p:
        raise HypothesisError(f"ell must differ from p = {p}")
    if tag.kind != "delta" and ell in (2, 3):
        raise HypothesisError("level-4 operators need ell not in {2, 3}")
    if modified:
        HeckeSpec(ell, p, modified=True)


class HeckeOperator:
    """Matrix of T_ell or T'_ell on the powers X^0..X^K of a uniformizer.

    Row i holds the coordinates of X^i | T.  Each build computes the q-images
    of all X^i, converts them with the residue inverse, and then certifies
    the result: re-expanding every row must reproduce the image on K+1+slack
    coefficients, and no image may exceed the degree of its source.
    """

    def __init__(self, tag: BasisTag, ell: int, modified: bool = True, slack: int = DEFAULT_SLACK):
        if tag.kind not in ("delta", "f"):
            raise ValueError("operators are built on the Delta or F bases")
        _check_operator(tag, ell, modified)
        self.tag, self.ell, self.modified, self.slack = tag, ell, modified, slack
        self._lock = threading.Lock()
        self._mat = np.zeros((0, 0), dtype=np.int64)
        self._fmat = None

    @property
    def size(self) -> int:
        return self._mat.shape[0] - 1

    def _build(self, K: int) -> np.ndarray:
        tag, ell, p, slack = self.tag, self.ell, self.tag.p, self.slack
        nimg = K + 1 + slack
        prec = ell * nimg
        pb = power_basis(tag)
        x = pb.uniformizer(prec)
        mult = _FixedMultiplier(x, p, prec)
        spec = HeckeSpec(ell, p, modified=self.modified)
        gw = tag.generator_weight
        images = np.zeros((K + 1, nimg), dtype=np.float64)
        powers = np.zeros((K + 1, nimg), dtype=np.float64)
        small = -(-nimg // ell)
        cur = np.zeros(prec, dtype=np.int64)
        cur[0] = 1
        for i in range(K + 1):
            if i:
                cur = mult(cur)
            img = cur[0: ell * nimg: ell].copy()
            img[::ell] += spec.epsilon(gw * i) * cur[:small]
            if spec.shifts_by_two:
                img -= 2 * cur[:nimg]
            images[i] = img % p
            powers[i] = cur[:nimg]
        inv = pb.inverse_matrix(K).astype(np.float64)
        mat = np.mod(images[:, : K + 1] @ inv, p)
        if np.triu(mat, 1).any():
            i, j = np.argwhere(np.triu(mat, 1))[0]
            raise ResidualNonzero(f"image of X^{i} has degree {j} > {i}")
        if not np.array_equal(np.mod(mat @ powers, p), images):
            raise ResidualNonzero("operator matrix does not reproduce the q-images")
        return mat.astype(np.int64)

    def matrix(self, K: int) -> np.ndarray:
        with self._lock:
            if self.size < K:
                target = K if self.size < 0 else max(K, self.size + self.size // 2)
                mat = self._build(target)
                mat.setflags(write=False)
                self._mat = mat
                self._fmat = None
            return self._mat[: K + 1, : K + 1]

    def float_matrix(self, K: int) -> np.ndarray:
        """The matrix as float32 when products stay exact, else float64."""
        self.matrix(K)
        with self._lock:
            if self._fmat is None:
                n = self._mat.shape[0]
                exact32 = n * (self.tag.p - 1) ** 2 < 2 ** 24
                self._fmat = self._mat.astype(np.float32 if exact32 else np.float64)
            return self._fmat[: K + 1, : K + 1]

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        d = len(coeffs) - 1
        if d < 0:
            return np.zeros(0, dtype=np.int64)
        return (np.asarray(coeffs, dtype=np.int64) @ self.matrix(d)) % self.tag.p


_OPERATORS: Dict[tuple, HeckeOperator] = {}
_OPERATORS_LOCK = threading.Lock()


def get_operator(tag: BasisTag, ell: int, modified: bool = True, slack: int = DEFAULT_SLACK) -> HeckeOperator:
    key = (tag, ell, modified, slack)
    with _OPERATORS_LOCK:
        if key not in _OPERATORS:
            _OPERATORS[key] = HeckeOperator(tag, ell, modified, slack)
        return _OPERATORS[key]


def clear_caches():
    """Drop all cached expansions and operator matrices."""
    with _OPERATORS_LOCK:
        _OPERATORS.clear()
    with _BASES_LOCK:
        _BASES.clear()


def _check_mixed(P: PolyRep, ell: int):
    p = P.basis.p
    if not P.is_homogeneous() and (ell * ell - 1) % p:
        raise HypothesisError(
            f"ell={ell} is not congruent to +-1 mod {p}; pass a single monomial"
        )


def hecke_on_poly(P: PolyRep, ell: int, modified: bool = True, slack: int = DEFAULT_SLACK) -> PolyRep:
    """Image of a polynomial representation under T_ell or T'_ell."""
    tag = P.basis
    if tag.kind == "d2":
        image = hecke_on_poly(d2_to_f(P), ell, modified, slack)
        return f_to_d2(image, strict=True)
    _check_operator(tag, ell, modified)
    _check_mixed(P, ell)
    if P.is_zero():
        return P
    op = get_operator(tag, ell, modified, slack)
    return PolyRep(tag, op.apply(P.coeffs))


def hecke_on_poly_direct(P: PolyRep, ell: int, modified: bool = True, slack: int = DEFAULT_SLACK) -> PolyRep:
    """Same map as :func:`hecke_on_poly` but through one q-expansion.

    Expands P to precision ell*(deg+1+slack), applies T_ell coefficientwise
    and solves back with degree bound deg(P).
    """
    tag = P.basis
    _check_mixed(P, ell)
    if P.is_zero():
        return P
    d = P.degree
    f = expand(P, ell * (d + 1 + slack))
    # the factor ell^(k-1) is the same for every monomial here
    spec = HeckeSpec(ell, tag.p, weight=tag.generator_weight * d, modified=modified)
    return to_poly(hecke_T(f, spec), tag, d, slack)


# ---------------------------------------------------------------------------
# the mod-5 basis {f_(5i+j)}

_F_SMALL = {
    0: (1,),
    1: (0, 1, 4),
    2: (0, 0, 1),
    3: (0, 0, 0, 1, 2, 3),
    4: (0, 0, 0, 0, 1, 1),
}


def f_basis_element(i: int, j: int) -> PolyRep:
    """f_(5i+j) = Delta^(5i) f_j in F_5[Delta]."""
    if not 0 <= j <= 4 or i < 0:
        raise ValueError("need i >= 0 and 0 <= j <= 4")
    base = np.array(_F_SMALL[j], dtype=np.int64)
    v = np.zeros(5 * i + len(base), dtype=np.int64)
    v[5 * i:] = base
    return PolyRep(delta_basis(5), v)


def f_basis_index(m: int) -> PolyRep:
    return f_basis_element(m // 5, m % 5)


def to_f_basis(P: PolyRep) -> Dict[int, int]:
    """Coordinates of a Delta-polynomial mod 5 in the basis {f_m}.

    f_m = q^m + ..., and the q-valuation of a Delta-polynomial is its lowest
    Delta-degree, so eliminating lowest terms first is back substitution.
    """
    if P.basis != delta_basis(5):
        raise ValueError("the f-basis lives in F_5[Delta]")
    coords = {}
    rem = P
    limit = (P.degree if not P.is_zero() else 0) + 10
    while not rem.is_zero():
        m = min(rem.terms())
        if m > limit:
            raise ResidualNonzero("f-basis elimination did not terminate")
        a = rem.terms()[m]
        coords[m] = a
        rem = rem - a * f_basis_index(m)
    return coords


# ---------------------------------------------------------------------------
# level 2 and level 4 apparatus mod 3


def rho_projection(f: QSeries, i: int) -> QSeries:
    """Keep only the coefficients c(n) with n = i mod 6."""
    mask = (np.arange(f.precision) % 6) == (i % 6)
    return QSeries(f.p, f.coeffs * mask, f.weight, f.level)


@dataclass
class Level2Apparatus:
    """A, G, Delta, D_2, F and g_i = A^i (A - A^2) mod 3, with structural checks."""

    N: int
    d: int
    A: QSeries
    G: QSeries
    Delta: QSeries
    D2: QSeries
    F: QSeries
    g: list
    checks: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _f_poly_series(terms: Dict[tuple, int], D2: QSeries, F: QSeries) -> QSeries:
    acc = QSeries.zero(3, D2.precision)
    for (a, b), c in terms.items():
        acc = acc + (D2 ** a) * (F ** b) * c
    return acc


def level2_apparatus(d: int, N: int) -> Level2Apparatus:
    """Build the level-2/level-4 forms mod 3 and evaluate their identities."""
    p = 3
    A = named_form(A_FORM, p, N)
    G = named_form(G_FORM, p, N)
    Dl = named_form(DELTA, p, N)
    D2 = named_form(d_delta(2), p, N)
    F = named_form(F_FORM, p, N)
    base = A - A * A
    g = []
    cur = base
    for i in range(d + 1):
        g.append(cur)
        cur = cur * A
    checks: Dict[str, bool] = {}
    checks["g0 = Delta + G"] = g[0].agrees_with(Dl + G)
    if d >= 1:
        checks["g1 = G"] = g[1].agrees_with(G)
    if d >= 3:
        checks["g3 = -Delta^2 + G + G^2"] = g[3].agrees_with(-(Dl * Dl) + G + G * G)
    if d >= 4:
        checks["g4 = -Delta^2 + G"] = g[4].agrees_with(-(Dl * Dl) + G)
    g0_cubed = g[0] ** 3
    checks["g_i = g_(i-3) - g_(i-6) g0^3"] = all(
        g[i].agrees_with(g[i - 3] - g[i - 6] * g0_cubed)
        for i in range(6, d + 1) if i % 3 != 2
    )
    checks["U3 kills g_i (i != 2 mod 3)"] = all(
        u_op(g[i], 3).is_zero() for i in range(d + 1) if i % 3 != 2
    )
    checks["h(Delta) = Delta^3 - G Delta + G^3 = 0"] = (Dl ** 3 - G * Dl + G ** 3).is_zero()
    checks["D2^2 = G"] = (D2 * D2).agrees_with(G)
    checks["P = 1"] = named_form(P_FORM, p, N).agrees_with(QSeries.one(p, N))
    checks["Theta^4 = 1 + 2F"] = (named_form(THETA_BIG, p, N) ** 4).agrees_with(F * 2 + 1)
    module_basis = [Dl, Dl * Dl, Dl * G * G, Dl * Dl * G, G, G * G]
    checks["U3 kills the G^3-module basis"] = all(u_op(b, 3).is_zero() for b in module_basis)
    cubic = [QSeries.one(p, N), Dl * G, Dl * Dl * G * G]
    checks["1, Delta G, Delta^2 G^2 supported on 3 | n"] = all(
        not np.any(b.coeffs[np.arange(N) % 3 != 0]) for b in cubic
    )
    D2F3 = lambda a, b: _f_poly_series({(a, b): 1}, D2, F)  # noqa: E731
    checks["rho1(Delta) = D2"] = rho_projection(Dl, 1).agrees_with(D2)
    checks["rho1(Delta^2 G) = -D2^4 F^3"] = rho_projection(Dl * Dl * G, 1).agrees_with(-D2F3(4, 3))
    checks["rho1(G) = rho1(G^2) = 0"] = rho_projection(G, 1).is_zero() and rho_projection(G * G, 1).is_zero()
    checks["rho5(Delta^2) = -D2^2 F^3"] = rho_projection(Dl * Dl, 5).agrees_with(-D2F3(2, 3))
    checks["rho5(Delta G^2) = D2^5"] = rho_projection(Dl * G * G, 5).agrees_with(D2 ** 5)
    checks["rho5(G) = rho5(G^2) = 0"] = rho_projection(G, 5).is_zero() and rho_projection(G * G, 5).is_zero()
    return Level2Apparatus(N, d, A, G, Dl, D2, F, g, checks)


def hecke_weight_factor(tag: BasisTag, ell: int, degree: int) -> int:
    """ell^(k-1) mod p for the monomial X^degree."""
    return ell_power(ell, tag.generator_weight * degree - 1, tag.p)


__all__ = [
    "NEG_INF", "BasisTag", "PolyRep", "delta_basis", "F_BASIS", "D2_SPAN",
    "basis_q_matrix", "to_poly", "expand", "hecke_on_poly", "hecke_on_poly_direct",
    "f_basis_element", "f_basis_index", "to_f_basis", "rho_projection",
    "level2_apparatus", "Level2Apparatus", "d2_power_in_f", "d2_to_f", "f_to_d2",
    "w_span_decompose", "in_w_span", "HeckeOperator", "get_operator", "power_basis",
    "degree_of", "clear_caches", "hecke_weight_factor", "DEFAULT_SLACK",
]
