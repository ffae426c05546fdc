"""Exact numeric evaluation of the weighted composition sums.

The central object is w[t][z] = sum over compositions x_1+...+x_t = z of
(x_1 ... x_t)^(-1+1/s), built by direct O(Z^2) convolution per layer.
On top of it sit the strictly-ordered variants (whose z -> infinity limit
is s^s * lambda_s), the expected representation weights that drive the
basis-order and complement scans, product bounds for families of rare
events, and a brute-force correlation sum for tiny instances.

Everything here is pure; arrays are never mutated after construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .constants import lambda_s
from .errors import DomainError, GuardExceededError
from .model import ComplementSequence

# size guards for the two exact evaluation paths of distinct_ordered_sum
ENUMERATION_OPS_GUARD = 4 * 10**8
CONVOLUTION_Z_GUARD = 30_000
CORRELATION_N_GUARD = 200


def _alpha(s: int) -> float:
    if s < 2:
        raise DomainError(f"s must be >= 2, got {s}")
    return -1.0 + 1.0 / s


@dataclass(frozen=True)
class WeightArray:
    """w[t][z] for 1 <= t <= t_max, 0 <= z <= Z (index [t, z]; w[t][0] = 0)."""

    s: int
    t_max: int
    Z: int
    w: np.ndarray

    def value(self, t: int, z: int) -> float:
        if not (1 <= t <= self.t_max and 0 <= z <= self.Z):
            raise DomainError(f"(t, z) = ({t}, {z}) outside the computed table")
        return float(self.w[t, z])


def weight_convolution(s: int, t_max: int, Z: int) -> WeightArray:
    """Build the weight table by iterated convolution of the t=1 row."""
    alpha = _alpha(s)
    if not 1 <= t_max <= s:
        raise DomainError(f"t_max must be in [1, s], got {t_max}")
    if Z < 1:
        raise DomainError(f"Z must be >= 1, got {Z}")
    w = np.zeros((t_max + 1, Z + 1))
    w1 = np.zeros(Z + 1)
    w1[1:] = np.arange(1, Z + 1, dtype=np.float64) ** alpha
    w[1] = w1
    for t in range(2, t_max + 1):
        w[t] = np.convolve(w1, w[t - 1])[: Z + 1]
    return WeightArray(s=s, t_max=t_max, Z=Z, w=w)


def normalized_weight_scan(s: int, t: int, z_grid) -> list[tuple[int, float]]:
    """(z, w[t][z] * z^(1 - t/s)) for each z; bounded iff w[t][z] << z^(-1+t/s)."""
    if not 1 <= t <= s - 1:
        raise DomainError(f"t must be in [1, s-1], got t={t}, s={s}")
    zs = sorted(int(z) for z in z_grid)
    if not zs or zs[0] < 1:
        raise DomainError("z grid must contain integers >= 1")
    table = weight_convolution(s, t, zs[-1])
    return [(z, float(table.w[t, z]) * z ** (1.0 - t / s)) for z in zs]


def inverse_tail_sum(s: int, t: int, z: int, table: WeightArray | None = None) -> float:
    """sum over r < z of w[t][r] * (z - r)^(-2t/s).

    Equals the composition sum with weight (x_1...x_t)^(-1+1/s) times
    (z - sum x_i)^(-2t/s) over all compositions with sum below z.
    """
    if not 1 <= t <= s - 1:
        raise DomainError(f"t must be in [1, s-1], got t={t}, s={s}")
    if z < 2:
        raise DomainError(f"z must be >= 2, got {z}")
    if table is None or table.Z < z - 1 or table.t_max < t or table.s != s:
        table = weight_convolution(s, t, z - 1)
    rs = np.arange(t, z, dtype=np.int64)
    if rs.size == 0:
        return 0.0
    tails = (z - rs).astype(np.float64) ** (-2.0 * t / s)
    return float(np.dot(table.w[t, rs], tails))


# ---------------------------------------------------------------------------
# strictly ordered sums
# ---------------------------------------------------------------------------


def _ordered_sum_direct(alpha: float, t: int, z: int, lo: int) -> float:
    """sum over lo <= x_t < ... < x_1, sum = z, of prod x_i^alpha."""
    if t == 1:
        return float(z) ** alpha if z >= lo else 0.0
    if t == 2:
        ys = np.arange(lo, (z - 1) // 2 + 1, dtype=np.float64)
        if ys.size == 0:
            return 0.0
        return float(np.sum((ys * (z - ys)) ** alpha))
    # smallest part v; the t-1 larger parts are distinct and > v
    total = 0.0
    v_max = (z - t * (t - 1) // 2) // t
    for v in range(lo, v_max + 1):
        total += float(v) ** alpha * _ordered_sum_direct(alpha, t - 1, z - v, v + 1)
    return total


def _set_partitions(items: list[int]):
    """All partitions of `items` into non-empty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]


def _ordered_sum_convolution(alpha: float, s: int, z: int, lo: int) -> float:
    """Inclusion-exclusion over coincidence patterns of the convolution arrays.

    The sum over all-distinct tuples equals the signed sum over set
    partitions of the coordinate set, each block of size k contributing a
    restricted array f_k[k*v] = v^(k*alpha) for v >= lo; dividing by s!
    keeps one representative per strict ordering.
    """
    block_arrays: dict[int, np.ndarray] = {}

    def block_array(k: int) -> np.ndarray:
        if k not in block_arrays:
            f = np.zeros(z + 1)
            vs = np.arange(lo, z // k + 1, dtype=np.int64)
            if vs.size:
                f[vs * k] = vs.astype(np.float64) ** (k * alpha)
            block_arrays[k] = f
        return block_arrays[k]

    total = 0.0
    for partition in _set_partitions(list(range(s))):
        sizes = sorted(len(b) for b in partition)
        mu = 1.0
        for k in sizes:
            mu *= (-1.0) ** (k - 1) * math.factorial(k - 1)
        conv = block_array(sizes[0])
        for k in sizes[1:]:
            conv = np.convolve(conv, block_array(k))[: z + 1]
        total += mu * float(conv[z])
    return total / math.factorial(s)


def distinct_ordered_sum(s: int, z: int, g: float = 1, method: str = "auto") -> float:
    """sum over g <= x_s < ... < x_1 with x_1 + ... + x_s = z of prod x_i^(-1+1/s).

    Tends to s^s * lambda_s as z grows (for cutoffs g = o(z)).  Two exact
    paths are available: direct enumeration below a size guard and the
    inclusion-exclusion convolution route above it; `method` forces one.
    """
    alpha = _alpha(s)
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    if g < 0:
        raise DomainError(f"cutoff g must be >= 0, got {g}")
    lo = max(1, math.ceil(g))
    if method not in ("auto", "direct", "convolution"):
        raise DomainError(f"unknown method {method!r}")
    direct_cost = 1.0 if s <= 2 else float(z) ** (s - 2) * z / (2 * math.factorial(s - 2))
    if method == "direct" or (method == "auto" and (s == 2 or direct_cost <= ENUMERATION_OPS_GUARD)):
        if method == "direct" and direct_cost > 4 * ENUMERATION_OPS_GUARD:
            raise GuardExceededError(f"direct enumeration infeasible at s={s}, z={z}")
        return _ordered_sum_direct(alpha, s, z, lo)
    if z > CONVOLUTION_Z_GUARD:
        raise GuardExceededError(
            f"distinct_ordered_sum refused: z={z} above both path guards for s={s}"
        )
    return _ordered_sum_convolution(alpha, s, z, lo)


def refined_limit_error(s: int, z_grid) -> list[tuple[int, float]]:
    """(z, |distinct_ordered_sum(s, z, 1) - s^s lambda_s| * z^(1/(s+1))).

    Bounded sequences are consistent with an O(z^(-1/(s+1))) error against
    the limit; a sharper O(z^(-1/s)) rate is plausible but not asserted.
    """
    limit = s**s * lambda_s(s)
    out = []
    for z in sorted(int(z) for z in z_grid):
        err = abs(distinct_ordered_sum(s, z, 1) - limit)
        out.append((z, err * z ** (1.0 / (s + 1))))
    return out


# ---------------------------------------------------------------------------
# expected representation weights
# ---------------------------------------------------------------------------


def expected_basis_weight(n: int, s: int, c: float) -> float:
    """Expected number of representations n = x_1 + ... + x_{s+1} with all
    parts sampled, the smallest part below (c log n)^s and the s large
    parts distinct and above it.

    Exact evaluation of the sum of inclusion probabilities over that
    family; asymptotically (c lambda_s log n)(1 + o(1)), though the o(1)
    is substantial while (c log n)^s / n is not yet small.
    """
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    if n < 2:
        return 0.0
    cutoff = (c * math.log(n)) ** s
    if not cutoff < n / 2:
        raise DomainError(f"(c log n)^s = {cutoff:.1f} must be below n/2 = {n / 2:.1f}")
    lo_large = math.floor(cutoff) + 1  # smallest integer strictly above the cutoff
    x_max = math.ceil(cutoff) - 1
    if x_max < 1:
        return 0.0
    alpha = _alpha(s)
    total = 0.0
    for x in range(1, x_max + 1):
        if x >= cutoff:
            break
        total += float(x) ** alpha * distinct_ordered_sum(s, n - x, lo_large)
    return total / s ** (s + 1)


def expected_complement_weight(n: int, s: int, B: ComplementSequence, m: int) -> float:
    """sum over b in B, b < m of s^(-s) * distinct_ordered_sum(s, n - b, 1)."""
    if m > n / 2:
        raise DomainError(f"m = {m} must be at most n/2 = {n / 2:.1f}")
    total = 0.0
    for b in B.elements:
        b = int(b)
        if b >= m:
            break
        total += distinct_ordered_sum(s, n - b, 1)
    return total / s**s


def janson_product_bound(weights) -> tuple[float, float]:
    """(prod (1 - p), exp(-sum p)) for event probabilities p <= 1/2.

    The first value is the product lower bound on the probability that no
    event in an independent family occurs; the second is the factorless
    exponential upper envelope, and it always dominates the first.
    """
    ws = [float(p) for p in weights]
    for p in ws:
        if not 0.0 <= p <= 0.5:
            raise DomainError(f"event weight {p} outside [0, 1/2]")
    lower = 1.0
    for p in ws:
        lower *= 1.0 - p
    upper = math.exp(-math.fsum(ws))
    return lower, upper


# ---------------------------------------------------------------------------
# brute-force correlation sum for tiny instances
# ---------------------------------------------------------------------------


def _omega_family(n: int, s: int, c: float) -> list[tuple[int, ...]]:
    """All part sets {x_1 > ... > x_s > (c log n)^s > x_{s+1}} summing to n."""
    cutoff = (c * math.log(n)) ** s if n >= 2 else 0.0
    lo_large = math.floor(cutoff) + 1
    out: list[tuple[int, ...]] = []

    def large_parts(parts_left: int, rem: int, lo: int, acc: tuple[int, ...]):
        # choose the large parts smallest-first, strictly increasing
        if parts_left == 1:
            if rem >= lo:
                out.append(acc + (rem,))
            return
        v = lo
        while v * parts_left + parts_left * (parts_left - 1) // 2 <= rem:
            large_parts(parts_left - 1, rem - v, v + 1, acc + (v,))
            v += 1

    for small in range(1, n):
        if small >= cutoff:
            break
        large_parts(s, n - small, lo_large, (small,))
    return out


def correlation_bruteforce(n: int, s: int, c: float, guard_n: int = CORRELATION_N_GUARD) -> float:
    """Exact correlation sum over ordered pairs of distinct, intersecting
    part sets in the constrained family at n.

    Each pair contributes the product of inclusion probabilities over the
    union of its parts.  Refuses n above the guard (the family size grows
    polynomially and the pair loop quadratically).
    """
    if n > guard_n or s > 3:
        raise GuardExceededError(
            f"correlation_bruteforce guard: need n <= {guard_n} and s <= 3, got n={n}, s={s}"
        )
    if c <= 0:
        raise DomainError(f"c must be positive, got {c}")
    family = [frozenset(w) for w in _omega_family(n, s, c)]
    probs = {}

    def p(x: int) -> float:
        if x not in probs:
            probs[x] = float(x) ** (-1.0 + 1.0 / s) / s
        return probs[x]

    total = 0.0
    for i, w1 in enumerate(family):
        for j, w2 in enumerate(family):
            if i == j or not (w1 & w2):
                continue
            joint = 1.0
            for x in w1 | w2:
                joint *= p(x)
            total += joint
    return total
