"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `[criterion N] PASS/FAIL` line (run with `pytest -s`
to see them on success).
"""

import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import kepinch as kp
from kepinch.cli import execute, parse_command
from kepinch.sampling import haar_unitary, random_min_profile, random_phase
from kepinch.tensor import three_index_residual
from kepinch.variational import amgm_product_exact

GOLDEN = Path(__file__).parent / "data" / "analyze_golden.json"


def report(n: int, ok: bool, detail: str) -> None:
    print(f"[criterion {n}] {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_closed_form_vs_oracle():
    rng = np.random.default_rng(20240817)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(500):
        profile = random_min_profile(rng)
        summary = kp.curvature_summary(profile)
        tensor = kp.build_tensor(profile, random_phase(rng))
        brute = kp.brute_extrema(tensor, grid_n=32, refine_iters=200)
        worst = max(
            worst,
            abs(brute.k_min - summary.k_min),
            abs(brute.k_max - summary.k_max),
        )
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 60.0
    report(1, ok, f"500 profiles, worst |brute-closed| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= 1e-6
    assert elapsed < 60.0


def test_criterion_2_gaussian_machinery():
    mass = kp.gauss_moment(2, 0) + 2 * kp.gauss_moment(1, 1) + kp.gauss_moment(0, 2)
    exact_mass = mass == 6 * math.pi**2

    rng = np.random.default_rng(97)
    worst_exact = 0.0
    hits = 0
    for _ in range(100):
        profile = random_min_profile(rng)
        tensor = kp.build_tensor(profile, random_phase(rng))
        k_av = kp.curvature_summary(profile).k_av
        worst_exact = max(worst_exact, abs(kp.average_exact(tensor) - k_av))
        est = kp.average_mc(tensor, 100_000, int(rng.integers(0, 2**31)))
        if abs(est.estimate - k_av) <= 4.0 * est.stderr:
            hits += 1
    ok = exact_mass and worst_exact <= 1e-12 and hits >= 95
    report(
        2,
        ok,
        f"6*pi^2 exact = {exact_mass}, worst moment-expansion error = "
        f"{worst_exact:.2e}, MC within 4 sigma on {hits}/100",
    )
    assert exact_mass
    assert worst_exact <= 1e-12
    assert hits >= 95


def test_criterion_3_ratio_law():
    exact_ends = kp.ratio_t_map(0.0) == 2.0 / 3.0 and kp.ratio_t_map(1.0) == 1.0 / 3.0
    rng = np.random.default_rng(33)
    worst = 0.0
    in_bounds = True
    for _ in range(10_000):
        profile = random_min_profile(rng)
        ratio = kp.pinching_ratio(profile)
        if ratio is None:
            continue
        worst = max(worst, abs(ratio - kp.ratio_t_map(profile.t)))
        in_bounds &= 1.0 / 3.0 - 1e-12 <= ratio <= 2.0 / 3.0 + 1e-12
    ok = exact_ends and worst <= 1e-12 and in_bounds
    report(3, ok, f"law residual = {worst:.2e}, bounds held = {in_bounds}")
    assert exact_ends
    assert worst <= 1e-12
    assert in_bounds


def test_criterion_4_threshold_ladder():
    table = kp.thresholds()
    consts_ok = (
        abs(table.chi_siu_yang.chi - 0.383461) <= 1e-6
        and abs(table.chi_improved.chi - 0.473402) <= 1e-6
        and abs(table.chi_guan.chi - 0.5) <= 1e-6
    )

    cases = [
        (table.chi_guan.chi, lambda A, B: 3 * B - A >= 0),
        (table.chi_improved.chi, lambda A, B: 6 * B * B - A * A >= 0),
        (table.chi_siu_yang.chi, lambda A, B: 11 * B * B - 6 * A * A >= 0),
    ]
    rng = np.random.default_rng(44)
    mismatches = 0
    checked = 0
    while checked < 10_000:
        chi, algebraic = cases[checked % 3]
        t_star = kp.t_of_ratio(chi)
        t = t_star + rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-8.0, -0.7)
        if not 0.0 < t < 1.0:
            continue
        a = rng.uniform(-10.0, -0.5)
        b = rng.uniform(a / 2.0 + 0.1, 0.0)
        big_a = 2.0 * b - a
        if big_a <= 0.1:
            continue
        profile = kp.PinchingProfile(a, b, t * big_a)
        ratio = kp.pinching_ratio(profile)
        if (ratio <= chi + 1e-12) != algebraic(big_a, profile.bmod):
            mismatches += 1
        checked += 1
    ok = consts_ok and mismatches == 0
    report(
        4,
        ok,
        f"constants match = {consts_ok}, equivalence mismatches = "
        f"{mismatches}/10000 straddling samples",
    )
    assert consts_ok
    assert mismatches == 0


def test_criterion_5_lemma_verification():
    rng = np.random.default_rng(55)
    worst_three = 0.0
    worst_grad = 0.0
    for _ in range(200):
        profile = random_min_profile(rng)
        scrambled = kp.frame_change(
            kp.build_tensor(profile, random_phase(rng)), haar_unitary(rng)
        )
        _, change = kp.recover_profile(scrambled)
        aligned = kp.frame_change(scrambled, change)
        worst_three = max(worst_three, three_index_residual(aligned))
        worst_grad = max(
            worst_grad, kp.critical_gradient(aligned, kp.Direction(1.0, 0.0))
        )
    ok = worst_three <= 1e-7 and worst_grad <= 1e-6
    report(
        5,
        ok,
        f"200 scrambled tensors, worst three-index residual = {worst_three:.2e}, "
        f"worst gradient = {worst_grad:.2e}",
    )
    assert worst_three <= 1e-7
    assert worst_grad <= 1e-6


def test_criterion_6_observation_identity():
    rng = np.random.default_rng(66)

    exact_fails = 0
    for _ in range(1_000):
        big_a = Fraction(int(rng.integers(1, 400)), int(rng.integers(1, 40)))
        bmod = big_a * Fraction(int(rng.integers(1, 99)), 100)
        lam = Fraction(int(rng.integers(1, 99)), 100)
        factored, closed = amgm_product_exact(big_a, bmod, lam)
        if factored != closed:
            exact_fails += 1

    # float identity away from the factored form's singular denominator
    worst_float = 0.0
    for _ in range(1_000):
        big_a = rng.uniform(0.5, 5.0)
        t = rng.choice([rng.uniform(0.05, 0.35), rng.uniform(0.45, 0.95)])
        lam = rng.uniform(0.01, 0.99)
        factored, closed = amgm_product_exact(big_a, big_a * t, lam)
        worst_float = max(worst_float, abs(factored - closed) / max(1.0, abs(closed)))

    worst_sixth = 0.0
    direction_fails = 0
    for _ in range(1_000):
        big_a = rng.uniform(0.5, 5.0)
        t = rng.uniform(0.45, 0.95)
        bmod = big_a * t
        factored, closed = amgm_product_exact(big_a, bmod, 1.0 / 6.0)
        worst_sixth = max(worst_sixth, abs(factored - 1.0), abs(closed - 1.0))
        lam = rng.uniform(0.01, 0.99)
        _, closed_lam = amgm_product_exact(big_a, bmod, lam)
        if (closed_lam >= 1.0 - 1e-12) != (lam <= 1.0 / 6.0):
            direction_fails += 1

    ok = (
        exact_fails == 0
        and worst_float <= 1e-12
        and worst_sixth <= 1e-12
        and direction_fails == 0
    )
    report(
        6,
        ok,
        f"rational identity fails = {exact_fails}/1000, float residual = "
        f"{worst_float:.2e}, lambda=1/6 residual = {worst_sixth:.2e}, "
        f"threshold-direction fails = {direction_fails}/1000",
    )
    assert exact_fails == 0
    assert worst_float <= 1e-12
    assert worst_sixth <= 1e-12
    assert direction_fails == 0


def test_criterion_7_superharmonicity_certification():
    chi = kp.thresholds().chi_improved.chi
    t0 = time.perf_counter()
    clean_ok = True
    details = []
    for lam in (0.05, 1.0 / 6.0):
        rep = kp.certify_regime(chi, lam, 100_000, seed=20240817)
        counts = rep.violation_counts()
        bad = (
            counts.get("q-negative", 0)
            + counts.get("dominance-1", 0)
            + counts.get("dominance-2", 0)
        )
        clean_ok &= bad == 0 and rep.min_margin > 0.0
        details.append(f"lam={lam:.4g}: chain violations={bad}, margin={rep.min_margin:.2e}")
    elapsed = time.perf_counter() - t0

    rep_half = kp.certify_regime(chi, 0.5, 100_000, seed=20240817)
    product_ok = rep_half.product_range[1] < 1.0
    details.append(f"lam=0.5: product max = {rep_half.product_range[1]:.6f}")

    ok = clean_ok and product_ok and elapsed < 60.0
    report(7, ok, "; ".join(details) + f"; {elapsed:.1f}s")
    assert clean_ok
    assert product_ok
    assert elapsed < 60.0


def test_criterion_8_laplacian_consistency():
    fd0 = kp.FrameDerivatives()
    rng = np.random.default_rng(88)
    worst = 0.0
    for _ in range(1_000):
        profile = random_min_profile(rng)
        lap = kp.laplacian_point(profile)
        lap_s = kp.delta_s(profile, fd0)
        worst = max(
            worst,
            abs(lap.lap_r1111 - lap_s.lap_r1111),
            abs(lap.lap_r1212 - lap_s.lap_r1212),
        )
    first = kp.laplacian_point(kp.PinchingProfile(-3, -1, 0.5))
    second = kp.laplacian_point(kp.PinchingProfile(-5, -1, 1))
    worked = (first.lap_r1111, first.lap_r1212) == (1.25, -3.0) and (
        second.lap_r1111,
        second.lap_r1212,
    ) == (4.0, -12.0)
    ok = worst <= 1e-12 and worked
    report(8, ok, f"worst |delta_s - laplacian| = {worst:.2e}, worked values exact = {worked}")
    assert worst <= 1e-12
    assert worked


def test_criterion_9_cli_determinism_and_goldens():
    argv = ["analyze", "--a", "-3", "--b", "-1", "--B", "0.5", "--json"]
    code1, text1 = execute(parse_command(argv))
    code2, text2 = execute(parse_command(argv))
    golden = GOLDEN.read_text()
    doc = json.loads(text1)
    golden_ok = (
        code1 == 0
        and text1 == golden
        and text1 == text2
        and abs(doc["regime"]["ratio"] - 0.444444) <= 1e-6
        and doc["summary"]["k_max"] == -2.25
        and doc["variational"]["phi"] == 0.5
        and doc["variational"]["c_const"] == 10.5
    )

    clean = ["certify", "--chi", "improved", "--lambda", "0.1", "--samples", "2000", "--seed", "1"]
    dirty = ["certify", "--chi", "improved", "--lambda", "0.5", "--samples", "300", "--seed", "1"]
    code_clean, _ = execute(parse_command(clean))
    code_dirty, _ = execute(parse_command(dirty))
    exit_ok = code_clean == 0 and code_dirty == 2

    ok = golden_ok and exit_ok
    report(
        9,
        ok,
        f"golden+repeat identical = {golden_ok}, certify exits (0, 2) = "
        f"({code_clean}, {code_dirty})",
    )
    assert golden_ok
    assert exit_ok
