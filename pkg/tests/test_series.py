import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisor_sigma

from heckenil.errors import ModulusMismatch
from heckenil.partitions import euler_power_exact, partition_numbers
from heckenil.series import (
    DELTA, E4, E6, QSeries, eisenstein, euler_product, eta_quotient, kronecker, named_form,
    theta_op,
)

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13])


def series(p, n):
    return st.lists(st.integers(0, p - 1), min_size=n, max_size=n).map(lambda c: QSeries(p, c))


@st.composite
def series_pair(draw, n=40):
    p = draw(PRIMES)
    return p, draw(series(p, n)), draw(series(p, n))


def naive_mul(a, b, p):
    n = min(len(a), len(b))
    out = [0] * n
    for i in range(n):
        for j in range(n - i):
            out[i + j] += int(a[i]) * int(b[j])
    return [x % p for x in out]


@settings(max_examples=60, deadline=None)
@given(series_pair())
def test_product_matches_schoolbook(pfg):
    p, f, g = pfg
    assert list((f * g).coeffs) == naive_mul(f.coeffs, g.coeffs, p)


@settings(max_examples=40, deadline=None)
@given(series_pair(n=300))
def test_product_commutes_and_distributes(pfg):
    p, f, g = pfg
    assert f * g == g * f
    assert f * (f + g) == f * f + f * g


def test_long_product_matches_object_convolution():
    rng = np.random.default_rng(1)
    for p in (2, 7, 10007, 999983):
        a, b = rng.integers(0, p, 5000), rng.integers(0, p, 5000)
        exact = np.convolve(a.astype(object), b.astype(object))[:5000] % p
        got = (QSeries(p, a) * QSeries(p, b)).coeffs
        assert np.array_equal(got, exact.astype(np.int64)), p


@settings(max_examples=40, deadline=None)
@given(PRIMES.flatmap(lambda p: series(p, 60)))
def test_frobenius(f):
    p = f.p
    assert (f ** p).agrees_with(f.substitute(p).truncate(f.precision))


@settings(max_examples=40, deadline=None)
@given(series_pair(n=60))
def test_theta_leibniz_and_period(pfg):
    p, f, g = pfg
    assert theta_op(f * g) == theta_op(f) * g + f * theta_op(g)
    t = f
    for _ in range(p):
        t = theta_op(t)
    assert t == theta_op(f)


@settings(max_examples=40, deadline=None)
@given(PRIMES.flatmap(lambda p: series(p, 80)))
def test_inverse(f):
    f = QSeries(f.p, np.r_[1, f.coeffs[1:]])
    assert (f * f.inverse()) == QSeries.one(f.p, 80)


def test_delta_matches_ramanujan_tau():
    tau = [0] + euler_power_exact(24, 30)
    assert tau[1:6] == [1, -24, 252, -1472, 4830]
    for p in (2, 3, 5, 7, 23, 691):
        D = named_form(DELTA, p, 31)
        assert list(D.coeffs) == [t % p for t in tau[:31]]


def test_eisenstein_sigma_and_delta_relation():
    N = 200
    for p in (7, 11, 13):
        E = eisenstein(4, p, N)
        assert all(int(E[n]) == 240 * int(divisor_sigma(n, 3)) % p for n in range(1, 60))
    # 1728 Delta = E4^3 - E6^2 over the integers
    for p in (5, 7, 13):
        lhs = named_form(E4, p, N) ** 3 - named_form(E6, p, N) ** 2
        assert lhs == named_form(DELTA, p, N) * (1728 % p)


def test_euler_product_gives_partitions():
    pn = partition_numbers(101)
    assert pn[:8] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert pn[100] == 190569292
    for p in (2, 3, 5, 7):
        inv = euler_product(1, p, 101).inverse()
        assert list(inv.coeffs) == [x % p for x in pn]


def test_eta_quotient_is_power_of_delta():
    for p in (2, 3, 5, 7):
        assert eta_quotient({1: 48}, p, 300) == named_form(DELTA, p, 300) ** 2


def test_kronecker_symbol():
    assert [kronecker(a, 5) for a in range(5)] == [0, 1, -1, -1, 1]
    assert kronecker(-4, 3) == -1 and kronecker(-4, 5) == 1
    assert kronecker(2, 7) == 1 and kronecker(3, 7) == -1


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        QSeries.one(3, 10) * QSeries.one(5, 10)
