"""Acceptance criteria 1-10, one recorded pass/fail line each.

All comparisons are exact integer or residue equalities unless stated;
the crossover check uses strict float inequality.
"""
import math

import pytest

from heckenil.nilpotency import (
    S19_PRIME, S29_DOUBLE, crossover_check, s_index, verify_conjectures, verify_table2,
    verify_thm13,
)
from heckenil.partitions import check_prop15, check_thm16, check_thm18, tcore_oracle
from heckenil.suites import hecke_power_oracle, series_identities

import numpy as np

K_MAX_LEVEL1 = 500
K_MAX_LEVEL4 = 300
K_MAX_REDUCTIONS = 60
K_MAX_TABLE = 2000
TRUNCATED_PRECISION = 10_000
LEVEL1_PRIMES = {3: (2, 5, 7, 13), 5: (11, 19, 29, 31), 7: (13, 29, 41, 43)}


def _witness(rep, n=3):
    return ", ".join(str(w) for w in rep.failures[:n])


@pytest.mark.acceptance(1)
def test_level1_index_bounds(criterion):
    ks = range(1, K_MAX_LEVEL1 + 1)
    main_checked, main_bad, remarks = 0, [], {}
    for p, ells in LEVEL1_PRIMES.items():
        for ell in ells:
            reps = verify_thm13(ks, p, ell)
            main_checked += reps[0].checked
            main_bad += reps[0].failures
            if (p, ell) == (7, 29):
                remarks[(p, ell)] = reps[1]
    remarks[(5, 61)] = verify_thm13(ks, 5, 61)[1]
    parts = [f"main bounds {main_checked} checks, {len(main_bad)} violations"]
    for (p, ell), rep in remarks.items():
        status = "ok" if rep.passed else f"{len(rep.failures)} violations [{_witness(rep)}]"
        parts.append(f"refinement p={p} ell={ell}: {rep.checked} checks, {status}")
    ok = not main_bad and all(r.passed for r in remarks.values())
    criterion(ok, "; ".join(parts))
    assert not main_bad
    if not all(r.passed for r in remarks.values()):
        pytest.fail("; ".join(parts[1:]))


@pytest.mark.acceptance(2)
def test_level4_index_bounds(criterion):
    coprime = [k for k in range(1, K_MAX_LEVEL4 + 1) if math.gcd(k, 6) == 1]
    checked, bad = 0, []
    for ell in (5, 7, 11, 13):
        for ks in (coprime, range(1, K_MAX_REDUCTIONS + 1)):
            rep = verify_thm13(ks, 3, ell, "d2")[0]
            checked += rep.checked
            bad += rep.failures
    criterion(not bad, f"{checked} bound and reduction checks, {len(bad)} violations")
    assert not bad


@pytest.mark.acceptance(3)
def test_table2_closed_form(criterion):
    rep = verify_table2(K_MAX_TABLE)
    skipped = [w["k"] for w in rep.notes["formula_not_applicable"]]
    criterion(rep.passed, f"{rep.checked} exponents equal, {len(rep.failures)} mismatches; "
                          f"closed form not applicable at k={skipped}")
    assert rep.passed


@pytest.mark.acceptance(4)
def test_mod5_digit_conjecture(criterion):
    reps = {r.family: r for r in verify_conjectures(K_MAX_TABLE, S19_PRIME)}
    seq = reps["sequence"].notes["computed"]
    bad = {name: len(r.failures) for name, r in reps.items() if not r.passed}
    criterion(not bad, f"c = {[seq[t] for t in sorted(seq)]}; digit formula "
                       f"{reps['digit_formula'].checked} checks; index <= S' "
                       f"{reps['index_le_s'].checked} checks; mismatches {bad or 0}")
    assert [seq[t] for t in range(4)] == [0, 2, 6, 22]
    assert not bad


@pytest.mark.acceptance(5)
def test_mod7_sequence(criterion):
    ys = [s_index(2 * 7 ** t + 1, S29_DOUBLE) - 1 for t in (1, 2, 3)]
    expected = [3, 16, S29_DOUBLE.term(3)]
    criterion(ys == expected == [3, 16, 86], f"y1..y3 = {ys}, expected {expected}")
    assert ys == [3, 16, 86]


PROP_EXACT = [
    ("1a", 2, 5, m, None) for m in (1, 3, 5)
] + [("1a", 7, 13, m, None) for m in (1, 3)] + [
    ("2", 2, ell, m, "Delta") for m, ell in ((1, 5), (2, 7), (3, 5))
] + [("1b", 3, 5, m, None) for m in (1, 3)]
PROP_TRUNCATED = [
    ("1a", 23, 5, 1, None), ("1b", 11, 7, 1, None), ("1c", 7, 5, 1, None), ("1d", 5, 13, 1, None),
    ("1c", 7, 5, 3, None), ("1d", 5, 13, 3, None),
]


@pytest.mark.acceptance(6)
def test_vanishing_cases(criterion):
    exact = [check_prop15(c, p, ell, m, f=f) for c, p, ell, m, f in PROP_EXACT]
    trunc = [check_prop15(c, p, ell, m, TRUNCATED_PRECISION, f=f) for c, p, ell, m, f in PROP_TRUNCATED]
    bad = [r.params for r in exact + trunc if not r.passed]
    ok = not bad and all(r.rigor == "EXACT_BASIS" for r in exact) and \
        all(r.precision >= TRUNCATED_PRECISION for r in trunc)
    criterion(ok, f"{len(exact)} exact-basis identities, {len(trunc)} truncated at "
                  f"{TRUNCATED_PRECISION}; failing {bad or 'none'}")
    assert ok


@pytest.mark.acceptance(7)
def test_tcore_congruences(criterion):
    mod3 = check_thm16(3, 1, 1, 2, 1, n_max=10_000)
    mod5 = check_thm16(5, 1, 2, [19], n_max=1000)
    mod7 = check_thm16(7, 1, 2, [13, 41], n_max=200)
    scaled = mod3.notes["reading_scaled"]
    detail = (
        f"mod 3 a(8n-1) = -a(2n-1): {mod3.checked} odd n, {len(mod3.failures)} failures "
        f"(first n {[w['n'] for w in mod3.failures[:4]]}); shifted-by-3 reading "
        f"a((8n-1)/3) = -a((2n-1)/3): {scaled['failures']} failures; "
        f"mod 5: {mod5.checked} n, {len(mod5.failures)} failures; "
        f"mod 7 operator identity exact, {mod7.checked} n, {len(mod7.failures)} failures"
    )
    ok = mod3.passed and mod5.passed and mod7.passed
    criterion(ok, detail)
    assert mod5.passed and mod7.passed
    if not mod3.passed:
        pytest.fail(f"mod 3 congruence fails for {len(mod3.failures)} of {mod3.checked} n")


@pytest.mark.acceptance(8)
def test_p12_congruence(criterion):
    rep = check_thm18(1, 2, 5, n_max=10_000)
    readings = {r: check_thm18(r, 1, 5, 1, n_max=1000).notes for r in (5, 7)}
    held = {r: n["reading_that_holds"] for r, n in readings.items()}
    first_a = readings[5]["readings"]["A"]["first_failures"][:3]
    ok = rep.passed and rep.checked > 0 and all("B" in h for h in held.values())
    criterion(ok, f"p12((5n-1)/2) = 0 mod 3: {rep.checked} n, {len(rep.failures)} failures; "
                  f"exponent reading that holds {held} (reading A fails at r=5, n={first_a})")
    assert ok


@pytest.mark.acceptance(9)
def test_oracles(criterion):
    rng = np.random.default_rng(0)
    reps = [hecke_power_oracle(rng, rmax=6, nmax=50), tcore_oracle(7, 30),
            series_identities(rng, TRUNCATED_PRECISION)]
    ok = all(r.passed for r in reps)
    criterion(ok, "; ".join(f"{r.family} {r.checked} checks, {len(r.failures)} failures" for r in reps))
    assert ok


@pytest.mark.acceptance(10)
def test_crossover(criterion):
    rep = crossover_check(samples=10)
    where = {k: f"{v['computed']:.4g}" for k, v in rep.notes.items()}
    criterion(rep.passed, f"{rep.checked} strict comparisons, {len(rep.failures)} failures; "
                          f"computed crossovers {where}")
    assert rep.passed
