"""Hecke and U operators on q-expansions, plus the iterated-coefficient formula."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import HypothesisError, PrecisionError
from .series import QSeries, kronecker


def ell_power(ell: int, exponent: int, p: int) -> int:
    """ell^exponent mod p, allowing negative exponents."""
    if exponent >= 0:
        return pow(ell, exponent, p)
    return pow(pow(ell, -exponent, p), -1, p)


@dataclass(frozen=True)
class HeckeSpec:
    """Parameters of T_ell acting in characteristic p.

    ``modified`` selects T'_ell, which is T_ell - 2 when ell = 1 mod p and
    T_ell otherwise.  ``character`` is an optional discriminant D whose
    Kronecker symbol (D/ell) multiplies the ell^(k-1) term (nebentypus).
    """

    ell: int
    p: int
    weight: int | None = None
    modified: bool = False
    character: int | None = None

    def __post_init__(self):
        if self.modified:
            if self.ell == self.p:
                raise HypothesisError(f"modified operator needs ell != p (ell = p = {self.p})")
            if (self.ell * self.ell - 1) % self.p:
                raise HypothesisError(f"ell={self.ell} is not congruent to +-1 mod {self.p}")

    def epsilon(self, weight: int) -> int:
        """The factor chi(ell) ell^(k-1) mod p."""
        e = ell_power(self.ell, weight - 1, self.p)
        if self.character is not None:
            e *= kronecker(self.character, self.ell)
        return e % self.p

    @property
    def shifts_by_two(self) -> bool:
        return self.modified and self.ell % self.p == 1


def _integral_weight(w) -> int:
    if isinstance(w, Fraction):
        if w.denominator != 1:
            raise HypothesisError(f"half-integral weight {w} is not supported")
        return int(w)
    return int(w)


def hecke_T(f: QSeries, spec: HeckeSpec) -> QSeries:
    """Apply T_ell (or T'_ell); the result has precision floor(N / ell)."""
    w = spec.weight if spec.weight is not None else f.weight
    if w is None:
        raise HypothesisError("hecke_T needs a weight, from the series or the HeckeSpec")
    w = _integral_weight(w)
    if f.p != spec.p:
        raise HypothesisError(f"series is mod {f.p} but operator is mod {spec.p}")
    ell, N = spec.ell, f.precision
    if N < ell:
        raise PrecisionError(f"precision {N} is below ell = {ell}")
    m = N // ell
    c = f.coeffs
    out = c[0: ell * m: ell].copy()
    small = c[: -(-m // ell)]
    out[::ell] += spec.epsilon(w) * small
    if spec.shifts_by_two:
        out -= 2 * c[:m]
    return QSeries(f.p, out, w, f.level)


def u_op(f: QSeries, m: int) -> QSeries:
    """U_m: coefficient n becomes c(mn); precision floor(N / m)."""
    if f.precision < m:
        raise PrecisionError(f"precision {f.precision} is below m = {m}")
    k = f.precision // m
    return QSeries(f.p, f.coeffs[0: m * k: m], f.weight, f.level)


def apply_hecke_exact(coeffs: Sequence[int], ell: int, k: int) -> list[int]:
    """T_ell on an integer coefficient list, exactly, by the defining formula."""
    m = len(coeffs) // ell
    lk = ell ** (k - 1)
    return [
        coeffs[ell * n] + (lk * coeffs[n // ell] if n % ell == 0 else 0)
        for n in range(m)
    ]


def valuation(n: int, ell: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    s = 0
    while n % ell == 0:
        n //= ell
        s += 1
    return s


def iterated_coeff(
    c: Callable[[int], int], r: int, n: int, ell: int, k: int, p: int | None = None
) -> int:
    """Coefficient of q^n in f | T_ell^r from the closed binomial formula.

    ``c`` returns the coefficients of f.  With ``p`` given the result is
    reduced mod p, otherwise it is an exact integer.
    """
    if n < 1:
        raise ValueError("index must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    s = valuation(n, ell)
    lk = ell ** (k - 1)

    def term(i: int) -> int:
        e = r - 2 * i
        arg = n * ell ** e if e >= 0 else n // ell ** (-e)
        return lk ** i * c(arg)

    total = 0
    for i in range(0, min(s, r) + 1):
        total += math.comb(r, i) * term(i)
    for j in range(s + 1, (r + s) // 2 + 1):
        total += (math.comb(r, j) - math.comb(r, j - s - 1)) * term(j)
    return total % p if p is not None else total


def iterated_coeff_mod_p(
    c: Callable[[int], int], r: int, n: int, ell: int, k: int, p: int
) -> int:
    """c(ell^(p^r) n) - ell^(k-1) c(ell^(p^r - 2) n) mod p, for ell not dividing n."""
    if n % ell == 0:
        raise ValueError(f"ell={ell} divides n={n}")
    if ell == p or r < 1:
        raise ValueError("need ell != p and r >= 1")
    e = p ** r
    return (c(ell ** e * n) - ell_power(ell, k - 1, p) * c(ell ** (e - 2) * n)) % p


def series_accessor(f: QSeries) -> Callable[[int], int]:
    """Coefficient accessor over a QSeries, raising beyond its precision."""
    return f.__getitem__


def list_accessor(values: Sequence[int]) -> Callable[[int], int]:
    def get(n: int) -> int:
        if n >= len(values):
            raise IndexError(f"coefficient {n} is beyond the supplied range {len(values)}")
        return values[n]

    return get


def hecke_iterate(f: QSeries, spec: HeckeSpec, r: int) -> QSeries:
    for _ in range(r):
        f = hecke_T(f, spec)
    return f


def hecke_decomposition(f: QSeries, ell: int, weight: int) -> QSeries:
    """U_ell f + ell^(k-1) f(q^ell), the same operator assembled from parts."""
    u = u_op(f, ell)
    v = f.substitute(ell).truncate(u.precision)
    return (u + v * ell_power(ell, weight - 1, f.p)).with_meta(weight, f.level)


__all__ = [
    "HeckeSpec", "hecke_T", "u_op", "iterated_coeff", "iterated_coeff_mod_p",
    "apply_hecke_exact", "hecke_iterate", "hecke_decomposition", "ell_power",
    "series_accessor", "list_accessor", "valuation",
]
