import pytest
from hypothesis import given, settings, strategies as st
from sympy import partition as npartitions

from heckenil.errors import HypothesisError
from heckenil.partitions import (
    brute_force_tcore, check_prop15, check_thm16, check_thm18, euler_power_exact,
    generating_identity, k_pt, m_pt, m_pt_closed, odd_support_identity, partition_numbers,
    partition_table, power_partition_series, r_pm, tcore_counts, tcore_series, u_m, u_r,
)


def test_partition_numbers_match_sympy():
    assert partition_numbers(301) == [npartitions(n) for n in range(301)]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 22))
def test_tcore_counts_match_hook_enumeration(t, n):
    assert tcore_counts(t, n + 1)[n] == brute_force_tcore(t, n)


def test_tcore_series_reduces_exact_counts():
    exact = tcore_counts(9, 400)
    for p in (2, 3, 5, 7):
        assert list(tcore_series(9, p, 400).coeffs) == [x % p for x in exact]


def test_small_core_counts():
    # 1-cores: only the empty partition; 2-cores: staircases at triangular numbers
    assert tcore_counts(1, 10) == [1] + [0] * 9
    assert [n for n, a in enumerate(tcore_counts(2, 40)) if a] == [0, 1, 3, 6, 10, 15, 21, 28, 36]


def test_power_series():
    exact = euler_power_exact(24, 200)
    assert list(power_partition_series(24, 200, 7).coeffs) == [x % 7 for x in exact]
    assert euler_power_exact(1, 8) == [1, -1, -1, 0, 0, 1, 0, 1]


def test_family_constants():
    assert [k_pt(3, t) for t in (1, 2, 3)] == [1, 10, 91]
    assert [k_pt(5, t) for t in (1, 2)] == [1, 26]
    assert [k_pt(7, t) for t in (1, 2)] == [2, 100]
    for p, ell in ((3, 2), (3, 7), (5, 19), (7, 13)):
        for t in (1, 2, 3):
            assert m_pt(p, t, ell) == m_pt_closed(p, t, ell)
    assert [u_r(r) for r in (1, 5, 7)] == [1, 2, 3]
    assert [r_pm(2, m) for m in (1, 3, 5)] == [1, 3, 11]
    assert [u_m(m) for m in (1, 2, 3)] == [3, 5, 9]
    with pytest.raises(HypothesisError):
        r_pm(2, 2)


def test_generating_identities():
    for p, t in ((5, 1), (5, 2), (7, 1)):
        assert generating_identity(p, t, 3000)
    for t in (1, 2):
        assert generating_identity(3, t, 3000)
        assert not generating_identity(3, t, 3000, scaled=False)


def test_odd_support_identity():
    for r in (1, 3, 5):
        assert odd_support_identity(r, 400)


def test_tcore_congruence_mod_5():
    rep = check_thm16(5, 1, 2, [19], n_max=300)
    assert rep.passed and rep.checked > 250


def test_tcore_congruence_mod_3_scaled_reading():
    rep = check_thm16(3, 1, 1, 2, 1, n_max=400)
    assert rep.notes["reading_scaled"]["holds"]
    assert rep.failures  # the unscaled reading fails


def test_tcore_hypotheses():
    with pytest.raises(HypothesisError):
        check_thm16(11, 1, 1, 2, 1)
    with pytest.raises(HypothesisError):
        check_thm16(5, 1, 1, 11, 1)  # 11 is not -1 mod 5
    with pytest.raises(HypothesisError):
        check_thm16(5, 1, 2, [19, 29], 1)


def test_p12_congruence():
    rep = check_thm18(1, 2, 5, n_max=2000)
    assert rep.passed and rep.checked > 500
    rep = check_thm18(5, 1, 5, 1, n_max=300)
    assert rep.notes["reading_that_holds"] == ["B"]
    with pytest.raises(HypothesisError):
        check_thm18(3, 2, 5)


def test_vanishing_exact_cases():
    for case, p, ell, m, f in (("1a", 2, 5, 3, None), ("1a", 7, 13, 1, None),
                               ("2", 2, 5, 1, "Delta"), ("1b", 3, 5, 1, None)):
        rep = check_prop15(case, p, ell, m, f=f)
        assert rep.passed and rep.rigor == "EXACT_BASIS"


def test_vanishing_negative_control():
    # same exponent, but an ell outside the hypotheses does not kill it
    from heckenil.basis import PolyRep, delta_basis, hecke_on_poly
    assert not hecke_on_poly(PolyRep.monomial(delta_basis(7), 1), 29, modified=False).is_zero()
    with pytest.raises(HypothesisError):
        check_prop15("1a", 7, 29, 1)


def test_partition_table():
    rows = partition_table("tcore", 10, t=2, exact=True)
    assert [v for _, v in rows] == tcore_counts(2, 11)
    rows = partition_table("power", 10, mod=3, r=12)
    assert [v for _, v in rows] == [x % 3 for x in euler_power_exact(12, 11)]
