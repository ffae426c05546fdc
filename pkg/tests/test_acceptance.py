"""Acceptance suite: one test per numbered criterion, each printing a
PASS/FAIL line (run with `pytest tests/test_acceptance.py -v -s`).

Stochastic criteria are pinned to seed 20260808; every expected value
below was computed beforehand by an independent oracle (direct
enumeration, quadrature, or direct summation) and frozen here.
"""

import hashlib
import json
import math
import time

import numpy as np
import pytest

from pseudopowers import (
    ExperimentConfig,
    basis_threshold,
    build_complement,
    density,
    distinct_ordered_sum,
    expected_basis_weight,
    expected_complement_weight,
    gap_stats,
    lambda_s,
    naive_sumset,
    proof_m_cutoff,
    refined_limit_error,
    run_monte_carlo,
    s_fold_sumset,
    sample_sequence,
    threshold_target,
)
from pseudopowers import runio

SEED = 20260808
N_BIG = 10**6
LAMBDA_2 = math.pi / 8
LIMIT_DENSITY_2 = 1.0 - math.exp(-LAMBDA_2)  # 0.32476809334422274
# quadrature-oracle values (see test_constants.py for the oracle itself)
LAMBDA_3_ORACLE = 0.1186788237814625
THRESHOLD_2_ORACLE = 11.866063822122646  # 1/(lambda_2 (1 - 2 lambda_2))


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def big_trials():
    """20 sampled trials at N = 1e6 with their top-window density and the
    first 10 trials' max gap ratio (shared by criteria 2 and 5)."""
    window = (N_BIG // 2, N_BIG)
    densities, ratios = [], []
    for t in range(20):
        A = sample_sequence(2, N_BIG, SEED, t)
        S = s_fold_sumset(A, 2, N_BIG)
        densities.append(density(S, window))
        if t < 10:
            ratios.append(gap_stats(S, window).max_ratio)
    return densities, ratios


def test_criterion_01_constants():
    t0 = time.time()
    ok_l2 = abs(lambda_s(2) - math.pi / 8) <= 1e-12
    ok_l3 = abs(lambda_s(3) - LAMBDA_3_ORACLE) <= 1e-10 * LAMBDA_3_ORACLE
    thr = basis_threshold(2)
    # the formula value is 11.86606...; tolerance as stated (0.001)
    ok_thr = abs(thr - THRESHOLD_2_ORACLE) <= 1e-3
    elapsed = time.time() - t0
    ok = ok_l2 and ok_l3 and ok_thr and elapsed < 1.0
    _report(
        1,
        ok,
        f"lambda_2 - pi/8 = {lambda_s(2) - math.pi / 8:.2e}, "
        f"lambda_3 rel dev {abs(lambda_s(3) - LAMBDA_3_ORACLE) / LAMBDA_3_ORACLE:.2e}, "
        f"threshold(2) = {thr:.6f} (oracle {THRESHOLD_2_ORACLE:.6f}), {elapsed:.3f}s",
    )


def test_criterion_02_sumset_density(big_trials):
    densities, _ = big_trials
    mean = float(np.mean(densities))
    ok = abs(mean - LIMIT_DENSITY_2) <= 0.02
    _report(
        2,
        ok,
        f"mean density over 20 trials = {mean:.5f}, "
        f"limit 1 - e^-lambda_2 = {LIMIT_DENSITY_2:.5f}, |dev| = {abs(mean - LIMIT_DENSITY_2):.5f} <= 0.02",
    )


def test_criterion_03_ordered_sum_limit():
    t0 = time.time()
    value = distinct_ordered_sum(2, 10**4, 1)
    limit = 4.0 * LAMBDA_2  # pi/2
    ok_value = abs(value - limit) <= 0.10 * limit
    rows = refined_limit_error(2, [500, 1000, 2000, 4000])
    normalized = [v for _, v in rows]
    raws = [v / z ** (1.0 / 3.0) for z, v in rows]
    ok_no_growth = normalized[-1] <= normalized[0] and max(normalized) <= 1.5 * normalized[0]
    ok_raw = raws[-1] < raws[0]
    elapsed = time.time() - t0
    ok = ok_value and ok_no_growth and ok_raw and elapsed < 60.0
    _report(
        3,
        ok,
        f"sum at z=1e4 is {value:.5f} vs pi/2 = {limit:.5f} ({abs(value - limit) / limit:.2%}); "
        f"normalized errors {['%.3f' % v for v in normalized]} show no growth; {elapsed:.1f}s",
    )


def test_criterion_04_oracle_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    checked = 0
    for i in range(200):
        s = 2 if i % 2 == 0 else 3
        N = int(rng.integers(30, 2001))
        if rng.random() < 0.5:
            A = sample_sequence(s, N, SEED, trial_id=i).elements.tolist()
        else:
            size = int(rng.integers(0, 45 if s == 2 else 30))
            A = sorted(rng.choice(np.arange(1, N + 1), size=min(size, N), replace=False).tolist())
        distinct = i % 4 < 2
        fast = s_fold_sumset(A, s, N, distinct=distinct)
        slow = naive_sumset(A, s, N, distinct=distinct)
        assert fast.bits == slow.bits, f"instance {i}: s={s}, N={N}, distinct={distinct}"
        checked += 1
    elapsed = time.time() - t0
    ok = checked == 200 and elapsed < 60.0
    _report(4, ok, f"{checked} randomized instances, exact set equality, {elapsed:.1f}s")


def test_criterion_05_gap_band(big_trials):
    _, ratios = big_trials
    lo = 0.3 * (1.0 / LAMBDA_2)
    hi = 3.0 * (1.0 / LAMBDA_2)
    hits = sum(1 for r in ratios if lo <= r <= hi)
    ok = hits >= 8
    _report(
        5,
        ok,
        f"max gap ratio in [{lo:.3f}, {hi:.3f}] for {hits}/10 trials "
        f"(ratios {['%.2f' % r for r in ratios]})",
    )


def test_criterion_06_basis_order_qualitative():
    config = ExperimentConfig(
        scenario="basis_order", s=2, N=N_BIG, trials=10, seed=SEED,
        c=15.0, windows=[(10**5, N_BIG)],
    )
    result = run_monte_carlo(config)
    monotone = 0
    zero_top = 0
    for trial in result.trials:
        w = trial.windows[0]
        counts = [c for (lo, _, c) in w.dyadic_counts if lo >= 2**17]
        if all(a >= b for a, b in zip(counts, counts[1:])):
            monotone += 1
        if not any(x >= N_BIG // 2 for x in w.exceptional):
            zero_top += 1
    ok = monotone >= 8 and zero_top >= 6
    _report(
        6,
        ok,
        f"dyadic exceptional counts non-increasing from 2^17 in {monotone}/10 trials; "
        f"zero exceptions in [N/2, N] in {zero_top}/10 (majority needed)",
    )


def test_criterion_07_complement_below_threshold():
    config = ExperimentConfig(
        scenario="complement", s=2, N=10**5, trials=5, seed=SEED, kind="below", c=1.0,
    )
    result = run_monte_carlo(config)
    xs = [t.x_count for t in result.trials]
    every_trial_hit = all(x >= 1 for x in xs)
    exponent = math.log(result.x_mean) / math.log(10**5) if result.x_mean > 0 else 0.0
    ok = every_trial_hit and 0.3 <= exponent <= 0.9
    _report(
        7,
        ok,
        f"X per trial {xs} (all >= 1); log(mean)/log(N) = {exponent:.4f} in [0.3, 0.9] "
        f"(predicted exponent 1 - c*lambda_2 = {1 - LAMBDA_2:.4f})",
    )


def test_criterion_08_complement_above_threshold():
    config = ExperimentConfig(
        scenario="complement", s=2, N=10**5, trials=5, seed=SEED, kind="above", c=4.0,
    )
    result = run_monte_carlo(config)
    xs = [t.x_count for t in result.trials]
    zeros = sum(1 for x in xs if x == 0)
    ok = zeros >= 4
    _report(8, ok, f"exceptional counts {xs}; zero in {zeros}/5 trials (>= 4 needed)")


def test_criterion_09a_basis_weight_band():
    """Exact family weight against its asymptote at n = 1e5, c = 15.

    KNOWN RED.  The weight is the exact sum of inclusion probabilities
    over part sets whose s large parts must exceed (c log n)^s.  At these
    parameters (c log n)^2 = 29823 is ~0.3 n, so the constrained ordered
    sums reach only ~27% of their limit value and the full ratio computes
    to ~0.21, far outside the stated asymptotic band [0.7, 1.3]; the band
    is reachable only when (c log n)^s << n, which for c = 15 needs n
    far beyond desk scale.  The check is kept as stated rather than
    weakened; see the project decision log.
    """
    n, s, c = 10**5, 2, 15.0
    weight = expected_basis_weight(n, s, c)
    target = c * LAMBDA_2 * math.log(n)
    ratio = weight / target
    ok = 0.7 <= ratio <= 1.3
    _report(
        9,
        ok,
        f"basis weight {weight:.4f} / (c lambda_2 log n = {target:.4f}) = {ratio:.4f}, "
        f"band [0.7, 1.3]; cutoff (c log n)^2 / n = {(c * math.log(n)) ** 2 / n:.3f}",
    )


def test_criterion_09b_complement_weight_band():
    n, s, c = 10**5, 2, 4.0
    B = build_complement(threshold_target("above", s, c=c), n)
    m = proof_m_cutoff(B, s, c, n)
    weight = expected_complement_weight(n, s, B, m)
    target = (c * LAMBDA_2 + 1.0) / 2.0 * math.log(n)
    ratio = weight / target
    ok = 0.7 <= ratio <= 1.3
    _report(
        9,
        ok,
        f"complement weight {weight:.4f} / ((c lambda_2 + 1)/2 log n = {target:.4f}) "
        f"= {ratio:.4f}, band [0.7, 1.3]",
    )


def test_criterion_10_determinism(tmp_path):
    config_text = json.dumps({
        "scenario": "complement", "kind": "below", "c": 1.0,
        "s": 2, "N": 20000, "trials": 3, "seed": SEED,
    })
    digests = []
    for name in ("run1", "run2"):
        config = runio.parse_config(config_text)
        result = run_monte_carlo(config)
        digests.append(runio.emit_results(result, tmp_path / name))
    ok = digests[0] == digests[1]
    _report(
        10,
        ok,
        f"two identical runs: results.json sha256 {digests[0]['results.json'][:16]}... == "
        f"{digests[1]['results.json'][:16]}...",
    )
