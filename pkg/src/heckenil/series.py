"""Truncated q-expansions over F_p and the classical forms built from them.

A :class:`QSeries` stores the residues c(0), ..., c(N-1) of a power series
together with its modulus and, optionally, the weight and level of the
modular form it represents.  Nothing beyond index N-1 is ever reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import ModulusMismatch, PrecisionError

# Below this length a direct convolution beats the FFT.
_DIRECT_LEN = 64
# Largest |coefficient sum| we trust a float64 FFT to reproduce exactly.
_FFT_EXACT = float(2 ** 44)


def _fft_size(n: int) -> int:
    return 1 << max(n - 1, 1).bit_length()


def _mul_trunc(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """Product of two coefficient vectors mod p, truncated to n terms."""
    a = a[:n]
    b = b[:n]
    out = np.zeros(n, dtype=np.int64)
    la, lb = len(a), len(b)
    if n == 0 or la == 0 or lb == 0:
        return out
    m = min(la + lb - 1, n)
    short = min(la, lb)
    if short * float(p - 1) ** 2 >= 2.0 ** 62:
        # int64 would overflow; fall back to Python integers
        exact = np.convolve(a.astype(object), b.astype(object))[:m] % p
        out[:m] = exact.astype(np.int64)
        return out
    if short <= _DIRECT_LEN or short * float(p - 1) ** 2 >= _FFT_EXACT:
        out[:m] = np.convolve(a, b)[:m] % p
        return out
    size = _fft_size(la + lb - 1)
    prod = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:m]
    rounded = np.rint(prod)
    if np.abs(prod - rounded).max() > 0.25:  # pragma: no cover - guard only
        out[:m] = np.convolve(a, b)[:m] % p
        return out
    out[:m] = rounded.astype(np.int64) % p
    return out


class _FixedMultiplier:
    """Repeated truncated multiplication by one fixed series.

    The transform of the fixed factor is computed once, which saves a third
    of the work when building long runs of powers X, X^2, X^3, ...
    """

    def __init__(self, b: np.ndarray, p: int, n: int):
        self.p, self.n = p, n
        self.size = _fft_size(2 * n - 1)
        self.fb = np.fft.rfft(np.asarray(b[:n], dtype=np.float64), self.size)
        if n * float(p - 1) ** 2 >= _FFT_EXACT:
            raise ValueError("modulus too large for the float kernel")

    def __call__(self, a: np.ndarray) -> np.ndarray:
        fa = np.fft.rfft(np.asarray(a[: self.n], dtype=np.float64), self.size)
        prod = np.fft.irfft(fa * self.fb, self.size)[: self.n]
        return np.rint(prod).astype(np.int64) % self.p


def _pow_small(c: np.ndarray, e: int, p: int, n: int) -> np.ndarray:
    result = np.zeros(n, dtype=np.int64)
    result[0] = 1
    base = c[:n]
    while e:
        if e & 1:
            result = _mul_trunc(result, base, p, n)
        e >>= 1
        if e:
            base = _mul_trunc(base, base, p, n)
    return result


def _substitute(c: np.ndarray, m: int, n: int) -> np.ndarray:
    """Coefficients of f(q^m) truncated to n terms."""
    out = np.zeros(n, dtype=np.int64)
    src = c[: -(-n // m)]
    out[::m][: len(src)] = src
    return out


def _pow_frobenius(c: np.ndarray, e: int, p: int, n: int) -> np.ndarray:
    # f^e = f(q^p)^(e // p) * f^(e % p) in characteristic p
    if e < p:
        return _pow_small(c, e, p, n)
    high = _pow_frobenius(c, e // p, p, -(-n // p))
    low = _pow_small(c, e % p, p, n)
    return _mul_trunc(_substitute(high, p, n), low, p, n)


def _inverse(c: np.ndarray, p: int, n: int) -> np.ndarray:
    if c[0] % p == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    b = np.array([pow(int(c[0]), -1, p)], dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        ab = _mul_trunc(c[:m], b, p, m)
        corr = (-ab) % p
        corr[0] = (corr[0] + 2) % p
        b = _mul_trunc(b, corr, p, m)
    return b[:n]


def _add_weights(a, b):
    if a is None or b is None:
        return None
    return a + b


def _join_levels(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return math.lcm(a, b)


@dataclass(frozen=True, eq=False)
class QSeries:
    """Power series c(0) + c(1)q + ... + c(N-1)q^(N-1) + O(q^N) over F_p."""

    p: int
    coeffs: np.ndarray
    weight: int | Fraction | None = None
    level: int | None = None

    def __post_init__(self):
        c = self.coeffs
        if isinstance(c, np.ndarray) and c.dtype.kind in "iu":
            arr = np.mod(c.astype(np.int64), self.p)
        else:
            arr = np.array([int(x) % self.p for x in c], dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # construction helpers
    @classmethod
    def one(cls, p: int, n: int, weight=0, level=None) -> "QSeries":
        c = np.zeros(n, dtype=np.int64)
        if n:
            c[0] = 1
        return cls(p, c, weight, level)

    @classmethod
    def zero(cls, p: int, n: int, weight=None, level=None) -> "QSeries":
        return cls(p, np.zeros(n, dtype=np.int64), weight, level)

    @classmethod
    def monomial(cls, p: int, m: int, n: int) -> "QSeries":
        c = np.zeros(n, dtype=np.int64)
        if m < n:
            c[m] = 1
        return cls(p, c)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def _like(self, coeffs, weight="same", level="same") -> "QSeries":
        return QSeries(
            self.p,
            coeffs,
            self.weight if weight == "same" else weight,
            self.level if level == "same" else level,
        )

    def __getitem__(self, n: int) -> int:
        if not 0 <= n < self.precision:
            raise IndexError(f"coefficient {n} is beyond precision {self.precision}")
        return int(self.coeffs[n])

    def __len__(self):
        return self.precision

    def _check(self, other: "QSeries"):
        if other.p != self.p:
            raise ModulusMismatch(f"cannot combine series mod {self.p} and mod {other.p}")

    def _binary_meta(self, other):
        w = self.weight if self.weight == other.weight else None
        return w, _join_levels(self.level, other.level)

    def __add__(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            n = min(self.precision, other.precision)
            w, lv = self._binary_meta(other)
            return self._like(self.coeffs[:n] + other.coeffs[:n], w, lv)
        if isinstance(other, (int, np.integer)):
            c = self.coeffs.copy()
            if len(c):
                c[0] += int(other)
            return self._like(c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (QSeries, int, np.integer)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            n = min(self.precision, other.precision)
            return QSeries(
                self.p,
                _mul_trunc(self.coeffs, other.coeffs, self.p, n),
                _add_weights(self.weight, other.weight),
                _join_levels(self.level, other.level),
            )
        if isinstance(other, (int, np.integer)):
            return self._like(self.coeffs * (int(other) % self.p))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        w = None if self.weight is None else self.weight * e
        n = self.precision
        if n == 0:
            return self._like(self.coeffs, w)
        return self._like(_pow_frobenius(self.coeffs, e, self.p, n), w)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.p == other.p
            and self.precision == other.precision
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    __hash__ = None

    def __repr__(self):
        terms = []
        for n, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}" if n == 0 else f"{c}q^{n}")
        body = " + ".join(terms) or "0"
        return f"QSeries(p={self.p}, {body} + ... + O(q^{self.precision}))"

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality of the coefficients both series know."""
        self._check(other)
        n = min(self.precision, other.precision)
        return bool(np.array_equal(self.coeffs[:n], other.coeffs[:n]))

    def truncate(self, n: int) -> "QSeries":
        if n > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {n}")
        return self._like(self.coeffs[:n])

    def shift(self, m: int) -> "QSeries":
        """Multiply by q^m; precision grows by m."""
        c = np.zeros(self.precision + m, dtype=np.int64)
        c[m:] = self.coeffs
        return self._like(c)

    def substitute(self, m: int) -> "QSeries":
        """The series f(q^m), known to precision m*N."""
        n = m * self.precision
        lv = None if self.level is None else self.level * m
        return self._like(_substitute(self.coeffs, m, n), level=lv)

    def inverse(self) -> "QSeries":
        w = None if self.weight is None else -self.weight
        return self._like(_inverse(self.coeffs, self.p, self.precision), w)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def valuation(self):
        nz = np.flatnonzero(self.coeffs)
        return int(nz[0]) if len(nz) else None

    def with_meta(self, weight=None, level=None) -> "QSeries":
        return QSeries(self.p, self.coeffs, weight, level)


def theta_op(f: QSeries) -> QSeries:
    """q d/dq, coefficientwise n*c(n); the weight tag grows by p+1."""
    n = np.arange(f.precision, dtype=np.int64) % f.p
    w = None if f.weight is None else f.weight + f.p + 1
    return QSeries(f.p, n * f.coeffs, w, f.level)


def euler_product(delta: int, p: int, N: int) -> QSeries:
    """prod_{n>=1} (1 - q^(delta n)) to precision N, from the pentagonal theorem."""
    if N < 1 or delta < 1:
        raise ValueError("need N >= 1 and delta >= 1")
    c = np.zeros(N, dtype=np.int64)
    c[0] = 1
    m = 1
    while delta * m * (3 * m - 1) // 2 < N:
        sign = -1 if m % 2 else 1
        c[delta * m * (3 * m - 1) // 2] = sign
        e2 = delta * m * (3 * m + 1) // 2
        if e2 < N:
            c[e2] = sign
        m += 1
    return QSeries(p, c)


def eta_quotient(exponents: Mapping[int, int], p: int, N: int, weight=None, level=None) -> QSeries:
    """prod eta(delta z)^e over the given exponents, as a q-series mod p.

    The leading power q^(sum delta*e / 24) must be a nonnegative integer.
    """
    order = sum(d * e for d, e in exponents.items())
    if order % 24 or order < 0:
        raise ValueError(f"eta quotient has leading exponent {Fraction(order, 24)}")
    order //= 24
    if weight is None:
        weight = Fraction(sum(exponents.values()), 2)
        if weight.denominator == 1:
            weight = int(weight)
    m = N - order
    if m <= 0:
        return QSeries.zero(p, N, weight, level)
    acc = np.zeros(m, dtype=np.int64)
    acc[0] = 1
    base_cache = {}
    for d, e in sorted(exponents.items()):
        if e == 0:
            continue
        size = -(-m // d)
        if size not in base_cache:
            base_cache[size] = euler_product(1, p, size).coeffs
        base = base_cache[size]
        if e < 0:
            base = _inverse(base, p, size)
        powered = _pow_frobenius(base, abs(e), p, size)
        acc = _mul_trunc(acc, _substitute(powered, d, m), p, m)
    out = np.zeros(N, dtype=np.int64)
    out[order:] = acc
    return QSeries(p, out, weight, level)


def _sigma(k: int, p: int, N: int) -> np.ndarray:
    s = np.zeros(N, dtype=np.int64)
    for d in range(1, N):
        s[d::d] += pow(d, k, p)
    return s % p


def eisenstein(k: int, p: int, N: int) -> QSeries:
    """E_2, E_4 or E_6 in the normalization with constant term 1."""
    scale = {2: -24, 4: 240, 6: -504}[k]
    c = (scale % p) * _sigma(k - 1, p, N)
    c[0] = 1
    return QSeries(p, c, k, 1)


@dataclass(frozen=True)
class NamedForm:
    """Tag for one of the classical forms used throughout the package."""

    kind: str
    delta: int = 1
    exponent: int = 1

    _KINDS = (
        "ETA_PRODUCT", "DELTA", "D_DELTA", "E2", "E4", "E6", "E2N",
        "THETA_BIG", "F_FORM", "A_FORM", "G_FORM", "P_FORM",
    )

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown form {self.kind!r}")
        if self.kind == "D_DELTA" and 24 % self.delta:
            raise ValueError(f"D_delta needs delta | 24, got {self.delta}")

    def eta_exponents(self):
        """Exponent map {delta: e} for eta-quotient forms, else None."""
        k = self.kind
        if k == "ETA_PRODUCT":
            return {self.delta: self.exponent}
        if k == "DELTA":
            return {1: 24}
        if k == "D_DELTA":
            return {self.delta: 24 // self.delta}
        if k == "THETA_BIG":
            return {2: 5, 1: -2, 4: -2}
        if k == "F_FORM":
            return {4: 8, 2: -4}
        if k == "A_FORM":
            return {2: 16, 1: -8}
        if k == "G_FORM":
            return {2: 24}
        return None

    @property
    def weight(self):
        k = self.kind
        if k in ("E2", "E4", "E6"):
            return int(k[1])
        if k in ("E2N", "P_FORM"):
            return 2
        w = Fraction(sum(self.eta_exponents().values()), 2)
        return int(w) if w.denominator == 1 else w

    @property
    def level(self) -> int:
        k = self.kind
        if k in ("E2", "E4", "E6", "DELTA"):
            return 1
        if k == "E2N":
            return self.delta
        if k == "D_DELTA":
            return self.delta ** 2 if self.delta > 1 else 1
        if k in ("THETA_BIG", "F_FORM"):
            return 4
        if k in ("A_FORM", "G_FORM", "P_FORM"):
            return 2
        # generic eta power: level read off from the quotient is left to the caller
        return self.delta


DELTA = NamedForm("DELTA")
E2 = NamedForm("E2")
E4 = NamedForm("E4")
E6 = NamedForm("E6")
THETA_BIG = NamedForm("THETA_BIG")
F_FORM = NamedForm("F_FORM")
A_FORM = NamedForm("A_FORM")
G_FORM = NamedForm("G_FORM")
P_FORM = NamedForm("P_FORM")


def eta_product(delta: int, e: int) -> NamedForm:
    return NamedForm("ETA_PRODUCT", delta, e)


def d_delta(delta: int) -> NamedForm:
    return NamedForm("D_DELTA", delta)


def e2n(n: int) -> NamedForm:
    return NamedForm("E2N", n)


def named_form(form: NamedForm, p: int, N: int, scale: int = 1) -> QSeries:
    """q-expansion of a named form f(scale*z) to precision N."""
    if scale < 1:
        raise ValueError("scale must be positive")
    exps = form.eta_exponents()
    level = form.level * scale
    if exps is not None:
        scaled = {d * scale: e for d, e in exps.items()}
        return eta_quotient(scaled, p, N, form.weight, level)
    m = -(-N // scale)
    if form.kind in ("E2", "E4", "E6"):
        f = eisenstein(form.weight, p, m)
    else:
        n = 2 if form.kind == "P_FORM" else form.delta
        e2 = eisenstein(2, p, m)
        f = e2.substitute(n).truncate(m) * n - e2
    f = f.with_meta(form.weight, form.level)
    if scale > 1:
        f = f.substitute(scale)
    return f.truncate(N).with_meta(form.weight, level)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    t = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 and a % 8 in (3, 5):
        t = -t
    if n < 0:
        n = -n
        if a < 0:
            t = -t
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def theta_expansion(kind: str, p: int, N: int, scale: int = 1) -> QSeries:
    """Sparse theta series.

    ETA:        sum chi_12(n) q^(scale n^2/24) over n >= 1, i.e. eta(scale z)
    ETA3:       sum chi_-4(n) n q^(scale n^2/8) over n >= 1, i.e. eta(scale z)^3
    THETA_SQSUM: sum over all integers n of q^(scale n^2)
    """
    c = np.zeros(N, dtype=np.int64)
    if kind == "ETA":
        if scale % 24:
            raise ValueError("eta expansion needs scale divisible by 24")
        n = 1
        while scale * n * n // 24 < N:
            if math.gcd(n, 6) == 1:
                c[scale * n * n // 24] += kronecker(12, n)
            n += 1
        weight = Fraction(1, 2)
    elif kind == "ETA3":
        if scale % 8:
            raise ValueError("eta-cube expansion needs scale divisible by 8")
        n = 1
        while scale * n * n // 8 < N:
            c[scale * n * n // 8] += kronecker(-4, n) * n
            n += 2
        weight = Fraction(3, 2)
    elif kind == "THETA_SQSUM":
        if N:
            c[0] = 1
        n = 1
        while scale * n * n < N:
            c[scale * n * n] += 2
            n += 1
        weight = Fraction(1, 2)
    else:
        raise ValueError(f"unknown theta kind {kind!r}")
    return QSeries(p, c, weight, None)
