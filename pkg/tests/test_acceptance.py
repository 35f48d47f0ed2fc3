"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines alongside the pytest verdicts.
"""

import math
import time

import mpmath
import numpy as np

from eprlink import (
    ErrorDensities,
    LinkGeometry,
    PauliProbs,
    apply_two_sided,
    at_length,
    bell_diagonal_project,
    bell_state,
    compose,
    concurrence,
    concurrence_vs_length,
    estimate_mu,
    iterate,
    iterate_bruteforce,
    monte_carlo_transmit,
    sweep,
    threshold_depolarizing,
    threshold_double_flip,
    threshold_generic,
    transmit,
    transmit_at_length,
    wootters_concurrence,
)
from eprlink.analysis import MeasurementPoint


def _report(num, ok, detail):
    print(f"[acceptance {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_01_concatenation_oracle_equivalence():
    rng = np.random.default_rng(101)
    probs = [PauliProbs(*rng.dirichlet([1.0] * 4)) for _ in range(1000)]
    start = time.perf_counter()
    worst = 0.0
    for p in probs:
        for n in range(21):
            closed = iterate(p, n).as_tuple()
            brute = iterate_bruteforce(p, n).as_tuple()
            worst = max(worst, max(abs(a - b) for a, b in zip(closed, brute)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(
        1, ok,
        f"iterate vs brute force over 1000 channels, n=0..20: max deviation "
        f"{worst:.2e} (tol 1e-12), {elapsed:.2f}s (limit 1s)",
    )


def test_02_semigroup_law():
    rng = np.random.default_rng(102)
    cases = [
        (ErrorDensities(*rng.uniform(0.0, 0.2, 3)), *rng.uniform(0.0, 30.0, 2))
        for _ in range(1000)
    ]
    start = time.perf_counter()
    worst = 0.0
    for mu, l1, l2 in cases:
        whole = at_length(mu, l1 + l2).as_tuple()
        split = compose(at_length(mu, l1), at_length(mu, l2)).as_tuple()
        worst = max(worst, max(abs(a - b) for a, b in zip(whole, split)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(
        2, ok,
        f"at_length(L1+L2) vs compose over 1000 cases: max deviation "
        f"{worst:.2e} (tol 1e-12), {elapsed:.2f}s (limit 1s)",
    )


def test_03_dense_channel_matches_bell_weights():
    rng = np.random.default_rng(103)
    pairs = [
        (PauliProbs(*rng.dirichlet([1.0] * 4)), PauliProbs(*rng.dirichlet([1.0] * 4)))
        for _ in range(1000)
    ]
    psi = bell_state("psi+")
    start = time.perf_counter()
    worst_dev, worst_resid = 0.0, 0.0
    for r, s in pairs:
        rho = apply_two_sided(r, s, psi)
        projected, residual = bell_diagonal_project(rho)
        closed = transmit(r, s)
        dev = max(abs(a - b) for a, b in zip(projected.as_tuple(), closed.as_tuple()))
        worst_dev = max(worst_dev, dev)
        worst_resid = max(worst_resid, residual)
    elapsed = time.perf_counter() - start
    ok = worst_dev <= 1e-12 and worst_resid < 1e-13 and elapsed < 5.0
    _report(
        3, ok,
        f"dense two-sided action vs closed-form weights over 1000 pairs: max "
        f"deviation {worst_dev:.2e} (tol 1e-12), max residual {worst_resid:.2e} "
        f"(< 1e-13), {elapsed:.2f}s (limit 5s)",
    )


def test_04_concurrence_oracle_equivalence():
    rng = np.random.default_rng(104)
    kinds = ("psi+", "psi-", "phi+", "phi-")
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        weights = rng.dirichlet([0.7] * 4)
        rho = sum(w * bell_state(k) for w, k in zip(weights, kinds))
        got = wootters_concurrence(rho)
        want = max(0.0, 2.0 * weights.max() - 1.0)
        worst = max(worst, abs(got - want))
    psi = bell_state("psi+")
    for _ in range(100):
        r = PauliProbs(*rng.dirichlet([1.0] * 4))
        s = PauliProbs(*rng.dirichlet([1.0] * 4))
        rho = apply_two_sided(r, s, psi)
        worst = max(worst, abs(wootters_concurrence(rho) - concurrence(transmit(r, s))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    _report(
        4, ok,
        f"Wootters vs Bell-diagonal closed form over 1100 states: max deviation "
        f"{worst:.2e} (tol 1e-9), {elapsed:.2f}s (limit 10s)",
    )


def test_05_error_density_from_drift_data():
    mu = estimate_mu(MeasurementPoint(0.01, 0.4))
    ok = 8.3e-3 <= mu <= 8.5e-3
    _report(5, ok, f"1% drift over 0.4 km -> mu = {mu:.4e}/km (expected in [8.3e-3, 8.5e-3])")


def test_06_error_density_from_qber_data():
    mu = estimate_mu(MeasurementPoint(0.043, 1.45))
    ok = 1.00e-2 <= mu <= 1.04e-2
    _report(6, ok, f"4.3% QBER over 1.45 km -> mu = {mu:.4e}/km (expected in [1.00e-2, 1.04e-2])")


def test_07_depolarizing_threshold_34km():
    result = threshold_depolarizing(8e-3)
    exact = math.log(3.0) / 0.032
    ok = (
        result.is_finite
        and 34.0 <= result.length_km <= 34.7
        and math.isclose(result.length_km, exact, rel_tol=1e-12)
    )
    _report(
        7, ok,
        f"depolarizing threshold at mu=8e-3: {result.length_km:.4f} km "
        f"(= ln3/(4 mu) = {exact:.4f}, expected in [34.0, 34.7])",
    )


def test_08_threshold_root_verification():
    rng = np.random.default_rng(108)
    start = time.perf_counter()
    ok = True
    detail = ""
    for _ in range(100):
        values = rng.uniform(5e-4, 0.05, 3)
        if rng.random() < 0.4:
            values[rng.integers(0, 3)] = 0.0
        mu = ErrorDensities(*values)
        result = threshold_generic(mu)
        if not result.is_finite:
            ok, detail = False, f"no threshold found for {values}"
            break
        before = concurrence_vs_length(mu, result.length_km - 1e-6)
        at = concurrence_vs_length(mu, result.length_km)
        if not (before > 0.0 and at <= 1e-12):
            ok, detail = False, f"bracket violated at mu={values}: {before}, {at}"
            break
    closed_dev = 0.0
    for mu in rng.uniform(1e-3, 0.1, 100):
        depol = threshold_generic(ErrorDensities(mu, mu, mu)).length_km
        closed_dev = max(closed_dev, abs(depol - threshold_depolarizing(mu).length_km))
        dflip = threshold_generic(ErrorDensities(mu, mu, 0.0)).length_km
        closed_dev = max(closed_dev, abs(dflip - threshold_double_flip(mu).length_km))
    elapsed = time.perf_counter() - start
    ok = ok and closed_dev < 1e-9 and elapsed < 1.0
    _report(
        8, ok,
        detail
        or f"100 random thresholds bracketed (C>0 before, C<=1e-12 at); bisection vs "
        f"closed forms max deviation {closed_dev:.2e} (tol 1e-9), {elapsed:.2f}s (limit 1s)",
    )


def test_09_single_flip_never_vanishes():
    mu = ErrorDensities(0.008, 0.0, 0.0)
    result = threshold_generic(mu)
    c100 = concurrence_vs_length(mu, 100.0)
    mpmath.mp.dps = 50
    exact100 = mpmath.exp(mpmath.mpf("-1.6"))
    exact_far = mpmath.exp(mpmath.mpf("-160"))  # L = 1e4 km, positive analytically
    ok = (
        not result.is_finite
        and c100 > 0.0
        and abs(c100 - float(exact100)) < 1e-12
        and exact_far > 0
    )
    _report(
        9, ok,
        f"single-flip channel: threshold {result.kind}; C(100 km) = {c100:.6f} "
        f"(= e^-1.6 = {float(exact100):.6f} by 50-digit check, positive down to e^-160)",
    )


def test_10_total_length_sufficiency():
    rng = np.random.default_rng(110)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        mu = ErrorDensities(*rng.uniform(0.0, 0.1, 3))
        total = rng.uniform(0.1, 50.0)
        ref_state = transmit(at_length(mu, total), at_length(mu, 0.0))
        ref_conc = concurrence(ref_state)
        for frac in np.linspace(0.0, 1.0, 10):
            geom = LinkGeometry(total * frac, total * (1.0 - frac))
            split_state = transmit(at_length(mu, geom.l1_km), at_length(mu, geom.l2_km))
            direct = transmit_at_length(mu, geom)
            dev = max(
                abs(a - b) for a, b in zip(split_state.as_tuple(), ref_state.as_tuple())
            )
            dev = max(
                dev,
                max(abs(a - b) for a, b in zip(direct.as_tuple(), ref_state.as_tuple())),
                abs(concurrence(split_state) - ref_conc),
            )
            worst = max(worst, dev)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    _report(
        10, ok,
        f"weights and concurrence over 10 splits x 100 cases: max deviation "
        f"{worst:.2e} (tol 1e-12), {elapsed:.2f}s (limit 1s)",
    )


def test_11_monte_carlo_validation():
    mu = ErrorDensities(8e-3, 8e-3, 8e-3)
    geom = LinkGeometry(5.0, 5.0)
    start = time.perf_counter()
    est = monte_carlo_transmit(mu, geom, segments_per_km=100, samples=1_000_000, seed=20240511)
    rerun = monte_carlo_transmit(mu, geom, segments_per_km=100, samples=1_000_000, seed=20240511)
    elapsed = time.perf_counter() - start
    reference = transmit_at_length(mu, geom)
    zscores = [
        abs(e - r) / se
        for e, r, se in zip(
            est.bell_diagonal.as_tuple(), reference.as_tuple(), est.standard_errors
        )
    ]
    ok = max(zscores) <= 4.0 and est == rerun and elapsed < 30.0
    _report(
        11, ok,
        f"10^6 samples at 100 segments/km: |z| = "
        f"{', '.join(f'{z:.2f}' for z in zscores)} (all <= 4), rerun identical: "
        f"{est == rerun}, {elapsed:.1f}s (limit 30s)",
    )


def test_12_concurrence_curve_shape():
    ok = True
    detail_parts = []
    for mu in (8e-3, 16e-3):
        table = sweep(ErrorDensities(mu, mu, mu), 60.0, 240)
        threshold = threshold_depolarizing(mu).length_km
        values = [r.concurrence for r in table.rows]
        monotone = all(b <= a for a, b in zip(values, values[1:]))
        starts_at_one = table.rows[0].concurrence == 1.0
        zero_beyond = all(r.concurrence == 0.0 for r in table.rows if r.length_km > threshold)
        positive_before = all(
            r.concurrence > 0.0 for r in table.rows if r.length_km < threshold - 0.25
        )
        ok = ok and monotone and starts_at_one and zero_beyond and positive_before
        detail_parts.append(f"mu={mu}: threshold {threshold:.2f} km")
    _report(
        12, ok,
        "curves monotone from 1 at L=0, exactly zero beyond ln3/(4 mu); "
        + "; ".join(detail_parts),
    )
