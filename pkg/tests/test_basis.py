import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heckenil.basis import (
    D2_SPAN, DEFAULT_SLACK, F_BASIS, PolyRep, d2_power_in_f, d2_to_f, delta_basis, expand,
    f_to_d2, get_operator, hecke_on_poly, hecke_on_poly_direct, in_w_span, to_f_basis,
    f_basis_index, to_poly,
)
from heckenil.errors import HypothesisError, ResidualNonzero
from heckenil.series import DELTA, F_FORM, QSeries, d_delta, named_form
from heckenil.suites import basis_suite

TAGS = st.sampled_from([delta_basis(2), delta_basis(3), delta_basis(5), delta_basis(7), F_BASIS])


@st.composite
def polys(draw, max_degree=40):
    tag = draw(TAGS)
    c = draw(st.lists(st.integers(0, tag.p - 1), min_size=1, max_size=max_degree + 1))
    return PolyRep(tag, c)


@settings(max_examples=80, deadline=None)
@given(polys())
def test_expand_then_solve_roundtrip(P):
    d = max(P.degree, 0) if not P.is_zero() else 0
    f = expand(P, d + 1 + DEFAULT_SLACK)
    assert to_poly(f, P.basis, d) == P


@settings(max_examples=40, deadline=None)
@given(polys(20), polys(20))
def test_expand_is_multiplicative(P, Q):
    if P.basis != Q.basis:
        Q = PolyRep(P.basis, Q.coeffs % P.basis.p)
    N = 150
    assert expand(P * Q, N) == expand(P, N) * expand(Q, N)


def test_uniformizers_match_named_forms():
    for p in (2, 3, 5, 7):
        assert expand(PolyRep.monomial(delta_basis(p), 1), 200) == named_form(DELTA, p, 200)
    assert expand(PolyRep.monomial(F_BASIS, 1), 200) == named_form(F_FORM, 3, 200)
    D2 = expand(d2_power_in_f(1), 200)
    assert D2 == named_form(d_delta(2), 3, 200)


def test_series_outside_span_is_rejected():
    f = QSeries.monomial(5, 1, 40) + QSeries.monomial(5, 3, 40)  # q + q^3 is not a Delta-polynomial of degree <= 1
    with pytest.raises(ResidualNonzero):
        to_poly(f, delta_basis(5), 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=30))
def test_d2_conversion_roundtrip(c):
    c = [x if math.gcd(j, 6) == 1 else 0 for j, x in enumerate(c)]
    P = PolyRep(D2_SPAN, c)
    assert f_to_d2(d2_to_f(P)) == P


def test_d2_strict_mode():
    sq = d2_power_in_f(2)
    assert f_to_d2(sq, strict=False).terms() == {2: 1}
    with pytest.raises(ResidualNonzero):
        f_to_d2(sq, strict=True)
    with pytest.raises(ResidualNonzero):
        f_to_d2(PolyRep.monomial(F_BASIS, 1))


@pytest.mark.parametrize("tag,ell", [
    (delta_basis(2), 3), (delta_basis(2), 5), (delta_basis(3), 2), (delta_basis(3), 7),
    (delta_basis(5), 11), (delta_basis(5), 19), (delta_basis(7), 13), (delta_basis(7), 29),
    (F_BASIS, 5), (F_BASIS, 7),
])
def test_operator_matrix_matches_q_expansion(tag, ell):
    rng = np.random.default_rng(ell)
    for k in list(range(1, 12)) + [int(x) for x in rng.integers(12, 80, 4)]:
        P = PolyRep.monomial(tag, k)
        assert hecke_on_poly(P, ell) == hecke_on_poly_direct(P, ell), k


def test_operator_lowers_degree():
    A = get_operator(delta_basis(5), 19, True).matrix(60)
    for k in range(1, 61):
        nz = np.flatnonzero(A[k])
        assert not len(nz) or nz[-1] < k


def test_operator_hypotheses():
    with pytest.raises(HypothesisError):
        hecke_on_poly(PolyRep.monomial(delta_basis(5), 3), 5)
    with pytest.raises(HypothesisError):
        hecke_on_poly(PolyRep.monomial(F_BASIS, 3), 2)
    with pytest.raises(HypothesisError):
        hecke_on_poly(PolyRep.monomial(delta_basis(5), 3), 7)


def test_d2_image_lands_in_w_span():
    for ell in (5, 7, 11, 13):
        for k in (1, 5, 7, 11, 13):
            img = hecke_on_poly(d2_power_in_f(k), ell, True)
            assert in_w_span(img, (k * ell) % 6)
            assert not in_w_span(img, (-k * ell) % 6) or img.is_zero()


def test_f_basis_coordinates_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(10):
        coords = {int(m): int(rng.integers(1, 5)) for m in rng.choice(40, 5, replace=False)}
        P = PolyRep.zero(delta_basis(5))
        for m, a in coords.items():
            P = P + a * f_basis_index(m)
        assert to_f_basis(P) == coords


def test_basis_suite_passes():
    reps = basis_suite(seed=3)
    assert [r.family for r in reps if not r.passed] == []
    assert all(r.checked > 0 for r in reps)
