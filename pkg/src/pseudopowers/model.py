"""Random pseudo s-th power sequences and deterministic complement sequences.

A pseudo s-th power sequence includes each integer n >= 1 independently
with probability n^(-1+1/s)/s, so that the counting function grows like
x^(1/s).  Sampling is driven by a splittable counter-based generator keyed
by (seed, trial_id, n): the membership of any index is reproducible
without generating the indices before it, distinct trial ids give
independent streams, and trials can run in parallel with no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError

_U64 = np.uint64
_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_TRIAL_MULT = _U64(0xD1342543DE82EF95)


def _mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer; wraps modulo 2^64."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _U64(30))) * _MIX1
        z = (z ^ (z >> _U64(27))) * _MIX2
        return z ^ (z >> _U64(31))


def _trial_key(seed: int, trial_id: int) -> np.uint64:
    k = _mix64(_U64(int(seed) & _MASK64) + _GOLDEN)
    with np.errstate(over="ignore"):
        return _mix64(k ^ (_U64(int(trial_id) & _MASK64) * _TRIAL_MULT + _U64(1)))


def index_uniforms(seed: int, trial_id, n) -> np.ndarray:
    """Uniform [0,1) variate for each (seed, trial_id, n) triple.

    Either `trial_id` or `n` may be an integer array; the two broadcast.
    The value depends only on the triple, never on evaluation order.
    """
    trial = np.asarray(trial_id, dtype=_U64)
    idx = np.asarray(n, dtype=_U64)
    with np.errstate(over="ignore"):
        k = _mix64(_U64(int(seed) & _MASK64) + _GOLDEN)
        key = _mix64(k ^ (trial * _TRIAL_MULT + _U64(1)))
        h = _mix64(key ^ (idx * _GOLDEN))
    return (h >> _U64(11)).astype(np.float64) * 2.0**-53


def inclusion_probability(n: int, s: int) -> float:
    """P(n in A) = n^(-1+1/s) / s, always in (0, 1/2] for s >= 2."""
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return float(n) ** (-1.0 + 1.0 / s) / s


@dataclass
class SequenceSample:
    """One sampled set A intersected with [1, N], plus its provenance.

    `elements` is the sorted member list; `mask()` exposes the same set as
    a boolean bitmap indexed by integer value (entry 0 unused).  Instances
    are immutable by convention and safe to share across threads.
    """

    s: int
    N: int
    seed: int
    trial_id: int
    elements: np.ndarray  # sorted int64

    _mask: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.elements = np.asarray(self.elements, dtype=np.int64)
        if self.elements.size:
            if int(self.elements[0]) < 1 or int(self.elements[-1]) > self.N:
                raise DomainError("elements outside [1, N]")
            if np.any(np.diff(self.elements) <= 0):
                raise DomainError("elements must be strictly increasing")

    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.N + 1, dtype=bool)
            m[self.elements] = True
            self._mask = m
        return self._mask

    def count_upto(self, x: int) -> int:
        """|A intersect [1, x]|; monotone non-decreasing in x."""
        if not 1 <= x <= self.N:
            raise DomainError(f"x must be in [1, {self.N}], got {x}")
        return int(np.searchsorted(self.elements, x, side="right"))

    def __len__(self) -> int:
        return int(self.elements.size)


def sample_sequence(s: int, N: int, seed: int, trial_id: int = 0) -> SequenceSample:
    """Draw A intersect [1, N] for one trial.

    Fully deterministic given (s, N, seed, trial_id); byte-identical
    element arrays on repeated calls.
    """
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if trial_id < 0:
        raise DomainError(f"trial_id must be >= 0, got {trial_id}")
    ns = np.arange(1, N + 1, dtype=np.int64)
    # p(1) = 1/s <= 1/2 for s >= 2, so no clamping is ever required
    probs = ns.astype(np.float64) ** (-1.0 + 1.0 / s) / s
    u = index_uniforms(seed, trial_id, ns)
    elements = ns[u < probs]
    return SequenceSample(s=s, N=N, seed=int(seed), trial_id=int(trial_id), elements=elements)


# ---------------------------------------------------------------------------
# complement sequences realized from a counting-function target
# ---------------------------------------------------------------------------

TargetFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ComplementTarget:
    """A counting-function target F(n) together with a readable description."""

    description: str
    fn: TargetFn

    def __call__(self, n) -> np.ndarray:
        return self.fn(np.asarray(n, dtype=np.float64))


@dataclass
class ComplementSequence:
    """A deterministic sequence B realized from a counting target F.

    The realized counting function B(n) = |{b in B : b <= n}| tracks
    floor(F(n)) to within 1 for every n past the catch-up point (for
    targets whose floor never jumps by more than one per step the two
    agree exactly from the first element on).
    """

    N: int
    target_description: str
    elements: np.ndarray  # sorted int64

    def counting(self, n) -> np.ndarray | int:
        """B(n), vectorized over n."""
        out = np.searchsorted(self.elements, np.asarray(n), side="right")
        return int(out) if out.ndim == 0 else out

    def __len__(self) -> int:
        return int(self.elements.size)


def build_complement(target: Union[ComplementTarget, TargetFn], N: int) -> ComplementSequence:
    """Realize a sequence B on [1, N] whose counting function tracks floor(F).

    n is added to B whenever the running count is still below floor(F(n)),
    one element per integer, so B(n) = floor(F(n)) as soon as F's floor
    steps are at most one per integer (catch-up covers any steep start).
    Raises DomainError when F decreases.
    """
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if N == 0:
        desc = getattr(target, "description", "F")
        return ComplementSequence(N=0, target_description=desc, elements=np.array([], dtype=np.int64))
    ns = np.arange(1, N + 1, dtype=np.float64)
    values = np.asarray(target(ns), dtype=np.float64)
    if values.shape != ns.shape:
        raise DomainError("target F must be vectorized over n")
    if np.any(np.diff(values) < -1e-9):
        raise DomainError("target F must be non-decreasing")
    floors = np.floor(values).astype(np.int64)
    elements = []
    count = 0
    for n, fl in enumerate(floors, start=1):
        if count < fl:
            elements.append(n)
            count += 1
    desc = getattr(target, "description", "F")
    return ComplementSequence(
        N=N, target_description=desc, elements=np.asarray(elements, dtype=np.int64)
    )
