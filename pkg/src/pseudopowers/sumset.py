"""s-fold sumsets, representation counts, densities, and gap statistics.

Sumset membership over [1, N] is held in a single big-integer bitmap (bit
n set iff n is a sum), so the core construction is word-parallel shifts
and ORs.  The unrestricted sumset repeats shifted-ORs of the running
bitmap by every element, s-1 times.  The distinct-parts variant is a
layered 0/1 dynamic program: D[j] holds sums of j pairwise-distinct
elements and each element is folded in once, updating D[j] from D[j-1]
in decreasing j order.

Bitmaps are immutable after construction; window queries are read-only.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DomainError, GuardExceededError
from .model import SequenceSample

NAIVE_GUARD = 10**8  # refuse brute force when |A|^s exceeds this

ElementsLike = Union[SequenceSample, np.ndarray, Sequence[int], Iterable[int]]


def _as_elements(A: ElementsLike) -> np.ndarray:
    if isinstance(A, SequenceSample):
        return A.elements
    arr = np.asarray(sorted(set(int(a) for a in A)), dtype=np.int64)
    if arr.size and arr[0] < 1:
        raise DomainError("set elements must be positive integers")
    return arr


class SumsetBitmap:
    """Membership bitmap of an s-fold sumset over [1, N]."""

    __slots__ = ("s", "N", "distinct", "bits", "_mask")

    def __init__(self, s: int, N: int, distinct: bool, bits: int):
        self.s = int(s)
        self.N = int(N)
        self.distinct = bool(distinct)
        self.bits = bits & ((1 << (N + 1)) - 1) & ~1  # integers 1..N only
        self._mask = None

    def contains(self, n: int) -> bool:
        if not 1 <= n <= self.N:
            return False
        return bool((self.bits >> n) & 1)

    __contains__ = contains

    def mask(self) -> np.ndarray:
        """Boolean membership array indexed by value; entry 0 is False."""
        if self._mask is None:
            nbytes = self.N // 8 + 1
            raw = self.bits.to_bytes(nbytes, "little")
            m = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
            self._mask = m[: self.N + 1].astype(bool)
        return self._mask

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask()).astype(np.int64)

    def elements_in(self, lo: int, hi: int) -> np.ndarray:
        e = self.elements()
        return e[(e >= lo) & (e <= hi)]

    def __len__(self) -> int:
        return int(self.mask().sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SumsetBitmap):
            return NotImplemented
        return (self.s, self.N, self.distinct, self.bits) == (
            other.s,
            other.N,
            other.distinct,
            other.bits,
        )

    def __hash__(self) -> int:
        return hash((self.s, self.N, self.distinct, self.bits))

    def __repr__(self) -> str:
        kind = "distinct" if self.distinct else "unrestricted"
        return f"SumsetBitmap(s={self.s}, N={self.N}, {kind}, |S|={len(self)})"


def _elements_bits(elements: np.ndarray, N: int) -> int:
    bits = 0
    for a in elements:
        a = int(a)
        if 1 <= a <= N:
            bits |= 1 << a
    return bits


def unrestricted_sumset_bits(elements: np.ndarray, s: int, N: int) -> int:
    mask = (1 << (N + 1)) - 1
    base = _elements_bits(elements, N)
    cur = base
    for _ in range(s - 1):
        if cur == 0:
            return 0
        nxt = 0
        for a in elements:
            nxt |= cur << int(a)
        cur = nxt & mask
    return cur


def distinct_sumset_bits(elements: np.ndarray, s: int, N: int) -> int:
    mask = (1 << (N + 1)) - 1
    layers = [1] + [0] * s  # layers[0]: empty sum at value 0
    for a in elements:
        a = int(a)
        for j in range(s, 0, -1):
            if layers[j - 1]:
                layers[j] = (layers[j] | (layers[j - 1] << a)) & mask
    return layers[s]


def s_fold_sumset(A: ElementsLike, s: int, N: int | None = None, distinct: bool = False) -> SumsetBitmap:
    """Exact membership of {a_1 + ... + a_s <= N : a_i in A}.

    With distinct=True the parts must be pairwise distinct.  For s=1 both
    variants reduce to A itself truncated to [1, N].
    """
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    elements = _as_elements(A)
    if N is None:
        if isinstance(A, SequenceSample):
            N = A.N
        elif elements.size:
            N = int(elements[-1]) * s
        else:
            N = 1
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    elements = elements[elements <= N]
    if distinct:
        bits = distinct_sumset_bits(elements, s, N)
    else:
        bits = unrestricted_sumset_bits(elements, s, N)
    return SumsetBitmap(s=s, N=N, distinct=distinct, bits=bits)


def naive_sumset(A: ElementsLike, s: int, N: int, distinct: bool = False) -> SumsetBitmap:
    """Brute-force enumeration with the same contract as s_fold_sumset.

    Used as the independent oracle; refuses instances above NAIVE_GUARD.
    """
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    elements = _as_elements(A)
    elements = elements[elements <= N]
    if elements.size and float(elements.size) ** s > NAIVE_GUARD:
        raise GuardExceededError(
            f"naive_sumset guard: |A|^s = {elements.size}^{s} exceeds {NAIVE_GUARD}"
        )
    combos = itertools.combinations if distinct else itertools.combinations_with_replacement
    bits = 0
    for tup in combos(elements.tolist(), s):
        total = sum(tup)
        if total <= N:
            bits |= 1 << total
    return SumsetBitmap(s=s, N=N, distinct=distinct, bits=bits)


def density(S: SumsetBitmap, window: tuple[int, int]) -> float:
    """|S intersect [L, R]| / (R - L + 1)."""
    L, R = int(window[0]), int(window[1])
    if not (1 <= L <= R <= S.N):
        raise DomainError(f"window [{L}, {R}] not inside [1, {S.N}]")
    return float(S.mask()[L : R + 1].sum()) / (R - L + 1)


@dataclass(frozen=True)
class GapStats:
    """Consecutive gaps of the sumset elements inside one window.

    max_ratio is max (b_{i+1} - b_i) / log(b_i) with the natural log taken
    at the gap's left endpoint.
    """

    window: tuple[int, int]
    elements: np.ndarray
    gaps: np.ndarray
    max_ratio: float


def gap_stats(S: SumsetBitmap, window: tuple[int, int]) -> GapStats:
    L, R = int(window[0]), int(window[1])
    if not (1 <= L <= R <= S.N):
        raise DomainError(f"window [{L}, {R}] not inside [1, {S.N}]")
    els = S.elements_in(L, R)
    if els.size < 2:
        raise DomainError("gap_stats needs at least 2 sumset elements in the window")
    gaps = np.diff(els)
    with np.errstate(divide="ignore"):
        ratios = gaps / np.log(els[:-1].astype(np.float64))
    return GapStats(window=(L, R), elements=els, gaps=gaps, max_ratio=float(ratios.max()))


@dataclass(frozen=True)
class RepConstraints:
    """Constraints on a counted representation n = x_1 + ... + x_t.

    Parts are taken in sorted order x_1 >= ... >= x_t (strictly decreasing
    when distinct).  Every part except the smallest must exceed
    min_large_part; the smallest part must lie strictly below
    smallest_part_bound.  None disables a bound.
    """

    count_of_parts: int
    distinct: bool = False
    min_large_part: int | None = None
    smallest_part_bound: int | None = None

    def __post_init__(self):
        if self.count_of_parts < 1:
            raise DomainError("count_of_parts must be >= 1")
        if self.min_large_part is not None and self.min_large_part < 0:
            raise DomainError("min_large_part must be non-negative")
        if self.smallest_part_bound is not None and self.smallest_part_bound < 0:
            raise DomainError("smallest_part_bound must be non-negative")


def count_representations(n: int, A: ElementsLike, constraints: RepConstraints) -> int:
    """Exact number of representations of n under the given constraints.

    Counts unordered tuples: multisets when repeats are allowed, strictly
    decreasing tuples when distinct.  Depth-first over the sorted element
    list, pruned by the achievable sum range at each level.
    """
    els = _as_elements(A)
    els = els[els <= n]
    t = constraints.count_of_parts
    mlp = constraints.min_large_part
    spb = constraints.smallest_part_bound
    strict = constraints.distinct
    if els.size == 0:
        return 0
    lst = els.tolist()

    def rec(rem: int, parts_left: int, hi_idx: int) -> int:
        # parts chosen largest-first; lst[:hi_idx+1] are the still-usable values
        if parts_left == 1:
            if rem < 1:
                return 0
            if spb is not None and rem >= spb:
                return 0
            j = bisect.bisect_right(lst, rem, 0, hi_idx + 1) - 1
            return 1 if j >= 0 and lst[j] == rem else 0
        total = 0
        for i in range(hi_idx, -1, -1):
            v = lst[i]
            if v * parts_left < rem:
                break  # all later candidates are smaller still
            if rem - v < parts_left - 1:
                continue  # cannot fill remaining parts with positive values
            if mlp is not None and v <= mlp:
                break  # non-smallest positions must exceed min_large_part
            total += rec(rem - v, parts_left - 1, i - 1 if strict else i)
        return total

    return rec(int(n), t, len(lst) - 1)
