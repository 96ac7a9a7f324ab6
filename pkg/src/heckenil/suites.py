"""Invariant and oracle suites shared by the CLI and the acceptance tests."""
from __future__ import annotations

import math

import numpy as np

from .basis import (
    DEFAULT_SLACK, D2_SPAN, F_BASIS, PolyRep, d2_power_in_f, delta_basis, expand,
    f_basis_element, get_operator, hecke_on_poly, in_w_span, level2_apparatus,
    rho_projection, to_poly,
)
from .hecke import HeckeSpec, apply_hecke_exact, hecke_T, iterated_coeff, list_accessor
from .partitions import euler_power_exact
from .reports import ARITHMETIC, EXACT_BASIS, TRUNCATED, CongruenceReport
from .series import (
    F_FORM, QSeries, THETA_BIG, d_delta, eta_product, kronecker, named_form,
    theta_expansion, theta_op,
)

DESCENT_PRIMES = {2: (3, 5, 7), 3: (2, 5, 7, 13), 5: (11, 19, 29, 31), 7: (13, 29, 41, 43)}


def _random_series(rng, p: int, N: int) -> QSeries:
    return QSeries(p, rng.integers(0, p, N))


def _report(family, params, rigor=EXACT_BASIS, precision=None):
    return CongruenceReport(family, params, rigor=rigor, precision=precision)


# ---------------------------------------------------------------------------
# basis invariants


def roundtrip_check(rng, dmax: int = 200, trials: int = 3) -> CongruenceReport:
    rep = _report("basis_roundtrip", {"d_max": dmax, "trials": trials})
    tags = [delta_basis(p) for p in (2, 3, 5, 7)] + [F_BASIS, D2_SPAN]
    for tag in tags:
        for _ in range(trials):
            d = int(rng.integers(1, dmax + 1))
            c = rng.integers(0, tag.p, d + 1)
            if tag == D2_SPAN:
                c[[j for j in range(d + 1) if math.gcd(j, 6) != 1]] = 0
            P = PolyRep(tag, c)
            if P.is_zero():
                continue
            back = to_poly(expand(P, P.degree + 1 + DEFAULT_SLACK), tag, P.degree)
            rep.checked += 1
            if back != P:
                rep.failures.append({"basis": str(tag), "degree": P.degree})
    return rep


def descent_check(kmax: int = 300) -> CongruenceReport:
    """Every Delta^k | T'_ell has Delta-degree below k."""
    rep = _report("degree_descent", {"k_max": kmax})
    for p, ells in DESCENT_PRIMES.items():
        for ell in ells:
            A = get_operator(delta_basis(p), ell, True).matrix(kmax)
            for k in range(1, kmax + 1):
                rep.checked += 1
                nz = np.flatnonzero(A[k])
                if len(nz) and nz[-1] >= k:
                    rep.failures.append({"p": p, "ell": ell, "k": k, "degree": int(nz[-1])})
    return rep


def f_basis_check(mmax: int = 100, N: int = 500) -> CongruenceReport:
    """Support classes mod 5 and the theta^2 eigenrelation for f_(5i+j)."""
    rep = _report("f_basis", {"m_max": mmax, "precision": N}, rigor=TRUNCATED, precision=N)
    classes = {0: {0}, 1: {1, 4}, 4: {1, 4}, 2: {2, 3}, 3: {2, 3}}
    idx = np.arange(N) % 5
    for m in range(mmax + 1):
        i, j = divmod(m, 5)
        f = expand(f_basis_element(i, j), N)
        rep.checked += 1
        support = set(idx[np.flatnonzero(f.coeffs)].tolist())
        if not support <= classes[j]:
            rep.failures.append({"m": m, "support_classes": sorted(support)})
        if not theta_op(theta_op(f)).agrees_with(f * (kronecker(j, 5) % 5)):
            rep.failures.append({"m": m, "theta2": False})
    return rep


def projection_check(N: int = 3000) -> CongruenceReport:
    """rho(f, i) | T_ell equals rho(f | T_ell, i / ell mod 6)."""
    rep = _report("rho_hecke", {"precision": N}, rigor=TRUNCATED, precision=N)
    D2 = named_form(d_delta(2), 3, N)
    F = named_form(F_FORM, 3, N)
    forms = [(D2, 6), (D2 ** 5, 30), (D2 * F ** 3, 12), (D2 ** 7 * F ** 2, 46)]
    for ell in (5, 7, 11, 13):
        inv = pow(ell, -1, 6)
        for f, w in forms:
            spec = HeckeSpec(ell, 3, w)
            img = hecke_T(f, spec)
            for i in range(6):
                rep.checked += 1
                if not hecke_T(rho_projection(f, i), spec).agrees_with(rho_projection(img, i * inv)):
                    rep.failures.append({"ell": ell, "weight": w, "i": i})
    return rep


def w_span_check(kmax: int = 60) -> CongruenceReport:
    """D_2^k | T'_ell lands in W_1 or W_5 as the residue of k * ell mod 6 predicts."""
    rep = _report("w_span", {"k_max": kmax})
    for ell in (5, 7, 11, 13):
        for k in range(1, kmax + 1):
            if math.gcd(k, 6) != 1:
                continue
            img = hecke_on_poly(d2_power_in_f(k), ell, True)
            target = (k * ell) % 6
            rep.checked += 1
            if not in_w_span(img, target):
                rep.failures.append({"ell": ell, "k": k, "target": f"W_{target}"})
    return rep


def level2_check(d: int = 30, N: int = 1000) -> CongruenceReport:
    app = level2_apparatus(d, N)
    rep = _report("level2", {"d": d, "precision": N}, rigor=TRUNCATED, precision=N)
    rep.checked = len(app.checks)
    rep.failures = [{"check": name} for name, ok in app.checks.items() if not ok]
    return rep


def basis_suite(seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    return [
        roundtrip_check(rng), descent_check(), f_basis_check(), projection_check(),
        w_span_check(), level2_check(),
    ]


# ---------------------------------------------------------------------------
# oracles


def hecke_power_oracle(rng, rmax: int = 6, nmax: int = 50) -> CongruenceReport:
    """Closed-form T_ell^r coefficients against direct iteration, over the integers.

    Random integer sequences stand in for forms when ell^r * nmax is large;
    Delta itself is used for ell = 2.
    """
    rep = _report("hecke_power_oracle", {"r_max": rmax, "n_max": nmax}, rigor=ARITHMETIC)
    k = 12
    for ell in (2, 3, 5):
        size = ell ** rmax * (nmax + 1)
        sources = {"random": [int(x) for x in rng.integers(-50, 51, size)]}
        if ell == 2:
            sources["Delta"] = [0] + euler_power_exact(24, size - 1)
        for name, coeffs in sources.items():
            cur = coeffs
            get = list_accessor(coeffs)
            for r in range(1, rmax + 1):
                cur = apply_hecke_exact(cur, ell, k)
                for n in range(1, nmax + 1):
                    rep.checked += 1
                    if iterated_coeff(get, r, n, ell, k) != cur[n]:
                        rep.failures.append({"ell": ell, "r": r, "n": n, "source": name})
    return rep


def series_identities(rng, N: int = 10_000) -> CongruenceReport:
    rep = _report("series_identities", {"precision": N}, rigor=TRUNCATED, precision=N)

    def check(name, ok):
        rep.checked += 1
        if not ok:
            rep.failures.append({"identity": name})

    for p in (2, 3, 5, 7):
        f = _random_series(rng, p, N)
        g = _random_series(rng, p, N)
        check(f"frobenius p={p}", (f ** p).agrees_with(f.substitute(p).truncate(N)))
        check(f"leibniz p={p}", theta_op(f * g).agrees_with(theta_op(f) * g + f * theta_op(g)))
        t = f
        for _ in range(p - 1):
            t = theta_op(t)
        check(f"theta^p = theta p={p}", theta_op(t).agrees_with(theta_op(f)))
        check(f"eta p={p}", named_form(eta_product(1, 1), p, N, 24)
              .agrees_with(theta_expansion("ETA", p, N, 24)))
        check(f"eta^3 p={p}", named_form(eta_product(1, 3), p, N, 8)
              .agrees_with(theta_expansion("ETA3", p, N, 8)))
        theta = named_form(THETA_BIG, p, N)
        check(f"theta sum of squares p={p}", theta.agrees_with(theta_expansion("THETA_SQSUM", p, N)))
        lhs = named_form(THETA_BIG, p, N, 24) * named_form(eta_product(24, 2), p, N) \
            * named_form(eta_product(96, 2), p, N)
        check(f"theta eta quotient p={p}", lhs.agrees_with(named_form(eta_product(48, 5), p, N)))
    return rep


def oracle_suite(seed: int = 0) -> list:
    from .partitions import tcore_oracle

    rng = np.random.default_rng(seed)
    return [hecke_power_oracle(rng), tcore_oracle(), series_identities(rng)]


__all__ = [
    "basis_suite", "oracle_suite", "roundtrip_check", "descent_check", "f_basis_check",
    "projection_check", "w_span_check", "level2_check", "hecke_power_oracle", "series_identities",
]
