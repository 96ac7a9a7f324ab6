import math

import pytest
from hypothesis import given, settings, strategies as st

from heckenil.basis import PolyRep, delta_basis, hecke_on_poly_direct
from heckenil.errors import CeilingExceeded, HypothesisError
from heckenil.nilpotency import (
    S19_PRIME, S29_DOUBLE, S_TRIPLE_7, S_TRIPLE_11, check_admissible, crossover_check,
    degree_lower, index_sweep, is_prime, linear_bound, modified_degree, nilpotency_index,
    ns_formula, reductions, s_index, verify_conjectures, verify_table2, verify_thm13,
)

DELTA_PAIRS = [(3, 2), (3, 7), (5, 11), (5, 19), (7, 13), (7, 29)]


def index_by_iteration(k, p, ell):
    """Index from repeated q-expansion round trips, independent of the operator matrix."""
    P = PolyRep.monomial(delta_basis(p), k)
    u = 0
    while not P.is_zero():
        P = hecke_on_poly_direct(P, ell, True)
        u += 1
    return u


@pytest.mark.parametrize("p,ell", DELTA_PAIRS)
def test_sweep_matches_q_expansion_oracle(p, ell):
    ks = list(range(1, 25))
    for rep in index_sweep(ks, p, ell):
        assert rep.index == index_by_iteration(rep.k, p, ell), rep.k
        assert len(rep.trajectory) == rep.index
        assert rep.trajectory[-1] == -math.inf
        finite = [d for d in rep.trajectory if d != -math.inf]
        assert all(a > b for a, b in zip([rep.k] + finite, finite))


def test_degree_lower_values():
    got = [degree_lower(k, 5, 19) for k in (1, 2, 4, 13, 6, 38, 26)]
    assert got == [-math.inf, -math.inf, 2, 10, 4, 35, 16]


def test_sweep_is_order_independent():
    a = index_sweep([40, 3, 17, 9], 7, 13)
    b = [nilpotency_index(k, 7, 13) for k in (3, 9, 17, 40)]
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_mod_2_indices_within_digit_formula():
    ks = list(range(1, 200, 2))
    for ell in (3, 5, 7):
        for rep in index_sweep(ks, 2, ell):
            assert rep.index <= ns_formula(rep.k)
    assert [ns_formula(k) for k in (1, 3, 5, 7, 19)] == [1, 2, 2, 3, 4]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(DELTA_PAIRS), st.integers(1, 150))
def test_index_within_linear_bound(pe, k):
    p, ell = pe
    b = linear_bound(p, ell, k)
    n = nilpotency_index(k, p, ell).index
    if b is not None:
        assert n <= b
    for sp, kk in reductions(p, k):
        assert n <= nilpotency_index(kk, p, ell, sp).index


def test_level4_indices():
    reps = verify_thm13([k for k in range(1, 80) if math.gcd(k, 6) == 1], 3, 5, "d2")
    assert reps[0].passed
    for rep in index_sweep([1, 5, 7, 11], 3, 7, "d2"):
        assert rep.index <= 1 + rep.k // 3


def test_admissibility():
    assert [n for n in range(60) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
                                                    41, 43, 47, 53, 59]
    check_admissible(5, 19)
    for p, ell, space in [(5, 7, "delta"), (5, 5, "delta"), (11, 23, "delta"), (5, 9, "delta"),
                          (5, 19, "d2"), (3, 2, "d2"), (3, 5, "other")]:
        with pytest.raises(HypothesisError):
            check_admissible(p, ell, space)


def test_ceiling():
    with pytest.raises(CeilingExceeded):
        index_sweep([38], 5, 19, ceiling=lambda k: 2)


def test_modified_degree_sequences():
    assert [s_index(5 ** t + 1, S19_PRIME) - 1 for t in range(4)] == [0, 2, 6, 22]
    assert [s_index(2 * 7 ** t + 1, S29_DOUBLE) - 1 for t in (1, 2)] == [3, 16]
    assert [s_index(2 * 3 ** t + 1, S_TRIPLE_7) - 1 for t in (1, 2, 3, 4)] == [1, 2, 4, 8]
    assert S19_PRIME.term(4) == 78 and S29_DOUBLE.term(3) == 86
    assert modified_degree(1, S19_PRIME) == -math.inf


def test_table2_closed_form_small_range():
    rep = verify_table2(300)
    assert rep.passed and rep.checked > 200


def test_conjecture_reports_small_range():
    for variant in (S19_PRIME, S_TRIPLE_7):
        reps = {r.family: r for r in verify_conjectures(150, variant)}
        assert reps["sequence"].passed and reps["index_le_s"].passed
    reps = {r.family: r for r in verify_conjectures(100, S_TRIPLE_11)}
    assert all(w["excluded_class"] for w in reps["index_le_s"].failures)


def test_crossover_arithmetic():
    rep = crossover_check()
    assert rep.passed and rep.checked == 80
    for note in rep.notes.values():
        assert abs(note["ratio"] - 1) < 0.01
