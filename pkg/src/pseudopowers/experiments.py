"""Monte Carlo drivers: basis-order scans, complement scans, threshold targets.

A scenario is a deterministic function of (config, seed): every trial is
keyed by its trial_id through the counter-based sampler, so reruns are
byte-identical, doubling the trial count never changes existing trials,
and trials are independent units of work.  Reports use dyadic windows
[2^k, 2^(k+1)) as the standard granularity for exceptional counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import ThresholdTable, lambda_s
from .errors import ConfigError, DomainError
from .model import (
    ComplementSequence,
    ComplementTarget,
    SequenceSample,
    build_complement,
    sample_sequence,
)
from .sumset import SumsetBitmap, density, gap_stats, s_fold_sumset

SCENARIOS = ("basis_order", "basis_eps", "complement")
COMPLEMENT_KINDS = ("above", "below", "at_plus", "at_minus")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    scenario: str
    s: int
    N: int
    trials: int = 10
    seed: int = 0
    windows: list[tuple[int, int]] | None = None
    c: float | None = None
    epsilon: float | None = None
    kind: str | None = None
    at_minus_coeff: float = 4.0
    require_distinct: bool = False
    good_filter: bool = False
    trial_ids: list[int] | None = None

    def __post_init__(self):
        if self.windows is None and self.N >= 1:
            self.windows = [((self.N + 1) // 2, self.N)]

    def effective_trial_ids(self) -> list[int]:
        if self.trial_ids is not None:
            return [int(t) for t in self.trial_ids]
        return list(range(self.trials))

    def validate(self) -> "ExperimentConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.s < 2:
            raise ConfigError(f"s: must be an integer >= 2, got {self.s}")
        if self.N < 1:
            raise ConfigError(f"N: must be >= 1, got {self.N}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.trial_ids is not None:
            if len(self.trial_ids) != self.trials:
                raise ConfigError("trial_ids: length must equal trials")
            if any(t < 0 for t in self.trial_ids):
                raise ConfigError("trial_ids: ids must be non-negative")
        if not self.windows:
            raise ConfigError("windows: at least one [lo, hi] window is required")
        for w in self.windows:
            lo, hi = int(w[0]), int(w[1])
            if not (1 <= lo <= hi <= self.N):
                raise ConfigError(f"windows: [{lo}, {hi}] not inside [1, {self.N}]")
        if self.scenario == "basis_order":
            if self.c is None or self.c <= 0:
                raise ConfigError(f"c: basis_order needs c > 0, got {self.c}")
        elif self.scenario == "basis_eps":
            if self.epsilon is None or not 0 < self.epsilon <= 1:
                raise ConfigError(f"epsilon: basis_eps needs 0 < epsilon <= 1, got {self.epsilon}")
        else:  # complement
            if self.kind not in COMPLEMENT_KINDS:
                raise ConfigError(f"kind: must be one of {COMPLEMENT_KINDS}, got {self.kind!r}")
            if self.kind in ("above", "below"):
                if self.c is None or self.c <= 0:
                    raise ConfigError(f"c: complement kind {self.kind!r} needs c > 0, got {self.c}")
                inv = 1.0 / lambda_s(self.s)
                if self.kind == "above" and self.c <= inv:
                    raise ConfigError(f"c: 'above' needs c > 1/lambda_s = {inv:.4f}, got {self.c}")
                if self.kind == "below" and self.c >= inv:
                    raise ConfigError(f"c: 'below' needs c < 1/lambda_s = {inv:.4f}, got {self.c}")
            if self.at_minus_coeff <= 0:
                raise ConfigError(f"at_minus_coeff: must be > 0, got {self.at_minus_coeff}")
        return self


# ---------------------------------------------------------------------------
# threshold counting-function targets
# ---------------------------------------------------------------------------


def threshold_target(
    kind: str,
    s: int,
    c: float | None = None,
    at_minus_coeff: float = 4.0,
) -> ComplementTarget:
    """Counting-function target F(n) for a complement scenario.

    above/below: F(n) = c log n with c on the stated side of 1/lambda_s.
    at_plus:     F(n) = (log n + 2 log log n) / lambda_s.
    at_minus:    F(n) = (log n - coeff * log log n) / lambda_s; the raw
                 formula dips before n = e^coeff, so it is held at its
                 minimum-point value there (and floored at zero) to keep
                 the counting target non-decreasing.
    """
    inv = 1.0 / lambda_s(s)
    if kind in ("above", "below"):
        if c is None or c <= 0:
            raise DomainError(f"kind {kind!r} needs c > 0, got {c}")
        if kind == "above" and c <= inv:
            raise DomainError(f"'above' needs c > 1/lambda_s = {inv:.4f}, got {c}")
        if kind == "below" and c >= inv:
            raise DomainError(f"'below' needs c < 1/lambda_s = {inv:.4f}, got {c}")
        cc = float(c)

        def fn(n: np.ndarray) -> np.ndarray:
            return np.maximum(cc * np.log(np.maximum(n, 1.0)), 0.0)

        return ComplementTarget(description=f"{cc:g}*log(n)", fn=fn)

    if kind == "at_plus":

        def fn(n: np.ndarray) -> np.ndarray:
            n = np.maximum(n, 2.0)
            return np.maximum(inv * (np.log(n) + 2.0 * np.log(np.log(n))), 0.0)

        return ComplementTarget(description="(log n + 2 log log n)/lambda_s", fn=fn)

    if kind == "at_minus":
        k = float(at_minus_coeff)
        if k <= 0:
            raise DomainError(f"at_minus coefficient must be > 0, got {k}")
        n_min = math.exp(k)  # raw formula decreases until log n = k

        def fn(n: np.ndarray) -> np.ndarray:
            n = np.maximum(np.maximum(n, 2.0), n_min)
            return np.maximum(inv * (np.log(n) - k * np.log(np.log(n))), 0.0)

        return ComplementTarget(description=f"(log n - {k:g} log log n)/lambda_s", fn=fn)

    raise DomainError(f"unknown complement kind {kind!r}")


def proof_m_cutoff(B: ComplementSequence, s: int, c: float, n: int) -> int:
    """Smallest m with B(m) = floor((c + 1/lambda_s)/2 * log n).

    The classical device restricting which complement elements the
    expected-weight computation may use; m = o(n) when B grows like
    c log with c above 1/lambda_s.
    """
    target = math.floor((c + 1.0 / lambda_s(s)) / 2.0 * math.log(n))
    if target <= 0:
        return 1
    if len(B) < target:
        raise DomainError(f"B has only {len(B)} elements; cannot reach count {target}")
    return int(B.elements[target - 1])


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def _window_array(window: tuple[int, int], N: int) -> np.ndarray:
    lo, hi = int(window[0]), int(window[1])
    if not (1 <= lo <= hi <= N):
        raise DomainError(f"window [{lo}, {hi}] not inside [1, {N}]")
    return np.arange(lo, hi + 1, dtype=np.int64)


def basis_order_scan(
    A: SequenceSample,
    s: int,
    c: float,
    window: tuple[int, int],
    require_distinct: bool = False,
    sumset_bitmap: SumsetBitmap | None = None,
) -> np.ndarray:
    """Integers n in the window with no representation n = a_1 + ... + a_{s+1},
    a_i in A, whose designated small part stays below (c log n)^s.

    Default mode requires only the small part bound.  With
    require_distinct=True the s large parts must also be pairwise distinct
    and each strictly above (c log n)^s, which can only grow the
    exceptional set.
    """
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    ns = _window_array(window, A.N)
    cutoffs = (c * np.log(ns.astype(np.float64))) ** s
    elements = A.elements
    exceptional = np.ones(ns.size, dtype=bool)

    if not require_distinct:
        if sumset_bitmap is None or sumset_bitmap.distinct or sumset_bitmap.N < int(ns[-1]):
            sumset_bitmap = s_fold_sumset(A, s, N=int(ns[-1]), distinct=False)
        member = sumset_bitmap.mask()
        for a in elements:
            a = int(a)
            if a >= cutoffs[-1]:
                break
            j = int(np.searchsorted(ns, a + 1))  # need n > a
            tail = slice(j, ns.size)
            cover = (cutoffs[tail] > a) & member[ns[tail] - a]
            exceptional[tail] &= ~cover
        return ns[exceptional]

    # distinct proof mode: the set of admissible large parts {a > (c log n)^s}
    # only shrinks as n grows, and is constant between cutoff crossings
    limit = int(ns[-1])
    cut_idx = np.searchsorted(elements, cutoffs, side="right")
    boundaries = np.flatnonzero(np.diff(cut_idx)) + 1
    seg_starts = np.concatenate(([0], boundaries))
    seg_ends = np.concatenate((boundaries, [ns.size]))
    for lo_i, hi_i in zip(seg_starts, seg_ends):
        seg = slice(int(lo_i), int(hi_i))
        large = elements[int(cut_idx[lo_i]) :]
        dist_mask = s_fold_sumset(large, s, N=limit, distinct=True).mask()
        seg_ns = ns[seg]
        seg_cut = cutoffs[seg]
        seg_exc = exceptional[seg]
        for a in elements:
            a = int(a)
            if a >= seg_cut[-1]:
                break
            j = int(np.searchsorted(seg_ns, a + 1))
            tail = slice(j, seg_ns.size)
            cover = (seg_cut[tail] > a) & dist_mask[seg_ns[tail] - a]
            seg_exc[tail] &= ~cover
        exceptional[seg] = seg_exc
    return ns[exceptional]


def basis_eps_scan(
    A: SequenceSample,
    s: int,
    epsilon: float,
    window: tuple[int, int],
    sumset_bitmap: SumsetBitmap | None = None,
) -> np.ndarray:
    """Integers n in the window with no representation whose designated
    small part is at most n^epsilon."""
    if not 0 < epsilon <= 1:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    ns = _window_array(window, A.N)
    bounds = ns.astype(np.float64) ** epsilon
    if sumset_bitmap is None or sumset_bitmap.distinct or sumset_bitmap.N < int(ns[-1]):
        sumset_bitmap = s_fold_sumset(A, s, N=int(ns[-1]), distinct=False)
    member = sumset_bitmap.mask()
    exceptional = np.ones(ns.size, dtype=bool)
    for a in A.elements:
        a = int(a)
        if a > bounds[-1]:
            break
        j = int(np.searchsorted(ns, a + 1))
        tail = slice(j, ns.size)
        cover = (a <= bounds[tail]) & member[ns[tail] - a]
        exceptional[tail] &= ~cover
    return ns[exceptional]


def complement_scan(
    A: SequenceSample,
    B: ComplementSequence,
    s: int,
    window: tuple[int, int],
    m_of_n: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    distinct_bitmap: SumsetBitmap | None = None,
) -> np.ndarray:
    """Integers n in the window with no decomposition n = (sum of s distinct
    sampled elements) + b over b in B, b < n.

    The optional m_of_n callable restricts to b < m(n), reproducing the
    proof-device setup; the default uses every b < n, which is the
    stronger empirical test.
    """
    ns = _window_array(window, A.N)
    if B.N < int(ns[-1]):
        raise DomainError(f"B built for limit {B.N} < window end {int(ns[-1])}")
    if distinct_bitmap is None or not distinct_bitmap.distinct or distinct_bitmap.N < int(ns[-1]):
        distinct_bitmap = s_fold_sumset(A, s, N=int(ns[-1]), distinct=True)
    member = distinct_bitmap.mask()
    m_values = None if m_of_n is None else np.asarray(m_of_n(ns))
    exceptional = np.ones(ns.size, dtype=bool)
    for b in B.elements:
        b = int(b)
        if b >= int(ns[-1]):
            break
        j = int(np.searchsorted(ns, b + 1))
        tail = slice(j, ns.size)
        cover = member[ns[tail] - b]
        if m_values is not None:
            cover = cover & (b < m_values[tail])
        exceptional[tail] &= ~cover
    return ns[exceptional]


def good_cutoff(N: int, s: int) -> float:
    return math.log(N) ** (4 * s)


def good_mask(ns: np.ndarray, N: int, B: ComplementSequence, s: int) -> np.ndarray:
    """Boolean array: True where min over b of |n - b| exceeds log(N)^(4s)."""
    cut = good_cutoff(N, s)
    if len(B) == 0:
        return np.ones(ns.size, dtype=bool)
    els = B.elements.astype(np.float64)
    pos = np.searchsorted(els, ns.astype(np.float64))
    left = np.where(pos > 0, ns - els[np.maximum(pos - 1, 0)], np.inf)
    right = np.where(pos < els.size, els[np.minimum(pos, els.size - 1)] - ns, np.inf)
    return np.minimum(left, right) > cut


def is_good_integer(n: int, N: int, B: ComplementSequence, s: int) -> bool:
    """Whether n in [N/2, N] keeps distance > log(N)^(4s) from every b in B.

    At desk scale log(N)^(4s) typically exceeds N itself, making every
    integer bad; the classifier records that the cutoff is an asymptotic
    device.
    """
    if not (N / 2 <= n <= N):
        raise DomainError(f"n = {n} outside [N/2, N] = [{N / 2:g}, {N}]")
    return bool(good_mask(np.asarray([n], dtype=np.int64), N, B, s)[0])


# ---------------------------------------------------------------------------
# trial reports and the Monte Carlo driver
# ---------------------------------------------------------------------------


@dataclass
class WindowReport:
    lo: int
    hi: int
    exceptional: list[int]
    exceptional_count: int
    density: float
    max_gap_ratio: float | None
    dyadic_counts: list[tuple[int, int, int]]  # (lo, hi, exceptional count)


@dataclass
class TrialReport:
    trial_id: int
    sample_size: int
    windows: list[WindowReport]
    x_count: int | None  # complement scenarios: exceptional count in [N/2, N]


@dataclass
class ScenarioResult:
    config: ExperimentConfig
    trials: list[TrialReport]
    x_mean: float | None
    x_variance: float | None  # unbiased; None when undefined (single trial)
    frac_below_half_mean: float | None


def dyadic_windows(lo: int, hi: int) -> list[tuple[int, int]]:
    """[2^k, 2^(k+1)) blocks clipped to [lo, hi]."""
    out = []
    k = int(math.floor(math.log2(lo))) if lo > 0 else 0
    while 2**k <= hi:
        blo, bhi = max(lo, 2**k), min(hi, 2 ** (k + 1) - 1)
        if blo <= bhi:
            out.append((blo, bhi))
        k += 1
    return out


def _dyadic_counts(exceptional: np.ndarray, lo: int, hi: int) -> list[tuple[int, int, int]]:
    out = []
    for blo, bhi in dyadic_windows(lo, hi):
        cnt = int(np.count_nonzero((exceptional >= blo) & (exceptional <= bhi)))
        out.append((blo, bhi, cnt))
    return out


def _scan_for(config: ExperimentConfig, A: SequenceSample, bitmap: SumsetBitmap,
              B: ComplementSequence | None, window: tuple[int, int]) -> np.ndarray:
    if config.scenario == "basis_order":
        return basis_order_scan(A, config.s, config.c, window,
                                require_distinct=config.require_distinct,
                                sumset_bitmap=bitmap if not config.require_distinct else None)
    if config.scenario == "basis_eps":
        return basis_eps_scan(A, config.s, config.epsilon, window, sumset_bitmap=bitmap)
    return complement_scan(A, B, config.s, window, distinct_bitmap=bitmap)


def run_trial(config: ExperimentConfig, trial_id: int,
              B: ComplementSequence | None = None) -> TrialReport:
    """Execute one trial; fully determined by (config.seed, trial_id)."""
    is_complement = config.scenario == "complement"
    if is_complement and B is None:
        target = threshold_target(config.kind, config.s, c=config.c,
                                  at_minus_coeff=config.at_minus_coeff)
        B = build_complement(target, config.N)
    A = sample_sequence(config.s, config.N, config.seed, trial_id)
    bitmap = s_fold_sumset(A, config.s, N=config.N, distinct=is_complement)

    reports = []
    for window in config.windows:
        lo, hi = int(window[0]), int(window[1])
        exc = _scan_for(config, A, bitmap, B, (lo, hi))
        try:
            ratio = gap_stats(bitmap, (lo, hi)).max_ratio
        except DomainError:
            ratio = None
        reports.append(
            WindowReport(
                lo=lo,
                hi=hi,
                exceptional=[int(x) for x in exc],
                exceptional_count=int(exc.size),
                density=density(bitmap, (lo, hi)),
                max_gap_ratio=ratio,
                dyadic_counts=_dyadic_counts(exc, lo, hi),
            )
        )

    x_count = None
    if is_complement:
        top = ((config.N + 1) // 2, config.N)
        exc_top = complement_scan(A, B, config.s, top, distinct_bitmap=bitmap)
        if config.good_filter:
            keep = good_mask(exc_top, config.N, B, config.s)
            exc_top = exc_top[keep]
        x_count = int(exc_top.size)
    return TrialReport(trial_id=int(trial_id), sample_size=len(A),
                       windows=reports, x_count=x_count)


def _aggregate(config: ExperimentConfig, trials: list[TrialReport]) -> ScenarioResult:
    xs = [t.x_count for t in trials if t.x_count is not None]
    if config.scenario == "complement" and xs:
        mean = float(np.mean(xs))
        var = float(np.var(xs, ddof=1)) if len(xs) >= 2 else None
        frac = float(np.mean([x < mean / 2.0 for x in xs]))
    else:
        mean = var = frac = None
    return ScenarioResult(config=config, trials=trials, x_mean=mean,
                          x_variance=var, frac_below_half_mean=frac)


def exceptional_statistic(config: ExperimentConfig) -> ScenarioResult:
    """Per-trial count of exceptional integers in [N/2, N] for a complement
    scenario, with mean, unbiased variance, and the frequency of trials
    falling below half the mean."""
    config.validate()
    if config.scenario != "complement":
        raise DomainError("exceptional_statistic requires a complement scenario")
    return run_monte_carlo(config)


def run_monte_carlo(config: ExperimentConfig) -> ScenarioResult:
    """Run every trial of the scenario and aggregate the reports.

    Deterministic: identical config (seed included) yields an identical
    result object; trials are keyed by trial_id, so extending the trial
    list never changes existing reports.
    """
    config.validate()
    B = None
    if config.scenario == "complement":
        target = threshold_target(config.kind, config.s, c=config.c,
                                  at_minus_coeff=config.at_minus_coeff)
        B = build_complement(target, config.N)
    trials = [run_trial(config, tid, B=B) for tid in config.effective_trial_ids()]
    return _aggregate(config, trials)
