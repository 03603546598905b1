"""Exact conditional-on-capacities distribution computations.

The holder count after k steps is 1 + PB(p_1..p_k) for a realized success
trace, so everything here reduces to the Poisson-binomial convolution
recurrence plus Poisson mixing over the random step count. Traces are
supplied explicitly (pinned or frozen from a simulation) because each p_k
depends on which nodes actually joined; the conditioning object is kept
visible rather than averaged away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .capacity import CapacitySequence
from .clock import ClockParams, poisson_pmf, truncation_index
from .spreading import SuccessProbabilityTrace, TrajectoryRecord, success_probability


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite pmf with a support offset and a recorded truncation deficit.

    The deficit is the probability mass cut off an infinite mixture; it is
    recorded, never renormalized back in, so tails stay comparable.
    """

    support_start: int
    probs: np.ndarray
    deficit: float = 0.0

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or len(probs) == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if np.any(probs < 0.0) or np.any(probs > 1.0 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        total = float(probs.sum())
        if total > 1.0 + 1e-9:
            raise ValueError(f"pmf mass {total} exceeds 1")
        if not (0.0 <= self.deficit < 1.0):
            raise ValueError(f"deficit must lie in [0, 1), got {self.deficit}")

    @property
    def support(self) -> range:
        return range(self.support_start, self.support_start + len(self.probs))

    @property
    def total_mass(self) -> float:
        return float(self.probs.sum())

    def pmf(self, i: int) -> float:
        j = i - self.support_start
        if 0 <= j < len(self.probs):
            return float(self.probs[j])
        return 0.0

    def items(self):
        for j, p in enumerate(self.probs):
            yield self.support_start + j, float(p)

    def to_csv(self, path, quantity: str, params: dict | None = None) -> None:
        """Documented export: `i,prob` rows, a naming comment up top and the
        truncation deficit as a trailing comment."""
        with open(path, "w") as fh:
            tags = " ".join(f"{k}={v}" for k, v in (params or {}).items())
            fh.write(f"# quantity={quantity}" + (f" {tags}" if tags else "") + "\n")
            fh.write("i,prob\n")
            for i, p in self.items():
                fh.write(f"{i},{p:.12e}\n")
            fh.write(f"# truncation_deficit={self.deficit:.6e}\n")


class _CompensatedArray:
    """Kahan-style compensated accumulator for long Poisson mixtures."""

    def __init__(self, size: int):
        self._sum = np.zeros(size)
        self._comp = np.zeros(size)

    def add(self, values: np.ndarray, offset: int = 0) -> None:
        view_s = self._sum[offset:offset + len(values)]
        view_c = self._comp[offset:offset + len(values)]
        y = values - view_c
        t = view_s + y
        view_c[:] = (t - view_s) - y
        view_s[:] = t

    def result(self) -> np.ndarray:
        return self._sum.copy()


def _validated_probs(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError("probability vector must be 1-d")
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    return arr


def _fold_bernoulli(pmf: np.ndarray, p: float) -> np.ndarray:
    out = np.zeros(len(pmf) + 1)
    out[:-1] = pmf * (1.0 - p)
    out[1:] += pmf * p
    return out


def poisson_binomial_pmf(p) -> DiscreteDistribution:
    """Exact pmf of a sum of independent Bernoulli(p_i) over {0..k}.

    Standard O(k^2) convolution recurrence, folding one trial at a time.
    """
    arr = _validated_probs(p)
    pmf = np.array([1.0])
    for p_i in arr:
        pmf = _fold_bernoulli(pmf, float(p_i))
    return DiscreteDistribution(support_start=0, probs=pmf)


def spread_pmf_fixed_k(trace) -> DiscreteDistribution:
    """P{#S_k = i | capacities} over {1..k+1} for a realized k-step trace.

    The initial holder shifts the Poisson binomial by one; the boundary
    cases collapse to the all-failure and all-success products.
    """
    probs = trace.probs if isinstance(trace, SuccessProbabilityTrace) else tuple(trace)
    if len(probs) == 0:
        raise ValueError("trace must contain at least one step probability")
    pb = poisson_binomial_pmf(probs)
    return DiscreteDistribution(support_start=1, probs=pb.probs)


TraceGenerator = Callable[[int], float]


def constant_trace(p: float) -> TraceGenerator:
    """Pinned trace with the same success probability at every step."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie strictly in (0, 1), got {p}")
    return lambda k: p


def pinned_single_source_trace(seq: CapacitySequence) -> TraceGenerator:
    """Trace along the path where the holder set stays pinned at node 0:
    p_k = 1 - exp(-cap_0*cap_k/L_k). The all-failure branch realizes it."""
    def gen(k: int) -> float:
        if k >= len(seq):
            raise ValueError(f"capacity sequence covers {len(seq)} nodes; need index {k}")
        return success_probability(seq.values[0], seq.values[k], seq.prefix_sums[k])
    return gen


def frozen_path_trace(record: TrajectoryRecord) -> TraceGenerator:
    """Trace replaying the p_k realized by one simulated trajectory."""
    probs = record.probability_trace().probs
    def gen(k: int) -> float:
        if not (1 <= k <= len(probs)):
            raise ValueError(f"frozen trajectory has {len(probs)} steps; need step {k}")
        return probs[k - 1]
    return gen


def _step_probability(trace_generator: TraceGenerator, k: int) -> float:
    p = float(trace_generator(k))
    if not (0.0 < p < 1.0):
        raise ValueError(f"trace generator returned p_{k}={p!r}, outside (0, 1)")
    return p


def spread_pmf_horizon(trace_generator: TraceGenerator, clock: ClockParams,
                       epsilon: float = 1e-10) -> DiscreteDistribution:
    """pmf of the holder count at the clock horizon, for a given trace.

    Poisson mixture over the step count: sum_k P{K*=k} * P{#S_k = i}, the
    k = 0 term being a point mass at 1. Truncated once the clock tail drops
    below epsilon; the cut mass is recorded as the deficit.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    mean = clock.mean_steps
    k_max = truncation_index(mean, epsilon)
    weights = np.array([poisson_pmf(mean, k) for k in range(k_max + 1)])

    acc = _CompensatedArray(k_max + 1)  # index j holds P{#S = j+1}
    pmf = np.array([1.0])  # Poisson-binomial pmf folded step by step
    acc.add(weights[0] * pmf, offset=0)
    for k in range(1, k_max + 1):
        pmf = _fold_bernoulli(pmf, _step_probability(trace_generator, k))
        acc.add(weights[k] * pmf, offset=0)

    deficit = max(0.0, 1.0 - float(weights.sum()))
    return DiscreteDistribution(support_start=1, probs=acc.result(), deficit=deficit)


def non_propagation_probability(seq: CapacitySequence, K: int) -> float:
    """Probability the message never leaves node 0 through step K:
    exp(-cap_0 * sum_{k=1..K} cap_k/L_k)."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if len(seq) < K + 1:
        raise ValueError(f"capacity sequence covers {len(seq)} nodes; need {K + 1}")
    alpha = seq.values[0] * math.fsum(
        seq.values[k] / seq.prefix_sums[k] for k in range(1, K + 1))
    return math.exp(-alpha)


def node_count_pmf(clock: ClockParams, i: int, n0: int = 1) -> float:
    """P{N at horizon = i}: the Poisson step-count pmf shifted by the
    initial graph size."""
    if i < 1:
        raise ValueError(f"i must be >= 1, got {i}")
    if n0 < 1:
        raise ValueError(f"n0 must be >= 1, got {n0}")
    if i < n0:
        return 0.0
    return poisson_pmf(clock.mean_steps, i - n0)


def _ratio_count(x: float, n: int) -> int:
    """Number of i in 1..n with i/n <= x, using the same float comparison a
    sampled ratio faces (floor(x*n) alone can sit on the wrong side of a
    representation boundary)."""
    m = int(math.floor(x * n))
    while m + 1 <= n and (m + 1) / n <= x:
        m += 1
    while m >= 1 and m / n > x:
        m -= 1
    return max(0, min(m, n))


def ratio_cdf(trace_generator: TraceGenerator, clock: ClockParams, x: float,
              epsilon: float = 1e-10, paper_faithful: bool = False) -> float:
    """P{#S/N <= x} at the clock horizon, for a given trace.

    The zero-step term has ratio exactly 1, so it belongs only at x >= 1;
    paper_faithful instead adds it for every x, reproducing the printed
    closed form verbatim. The truncated mixture undershoots the true CDF by
    at most the clock-tail deficit.
    """
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    mean = clock.mean_steps
    k_max = truncation_index(mean, epsilon)

    terms = []
    if paper_faithful or _ratio_count(x, 1) >= 1:
        terms.append(poisson_pmf(mean, 0))
    pmf = np.array([1.0])
    for k in range(1, k_max + 1):
        pmf = _fold_bernoulli(pmf, _step_probability(trace_generator, k))
        m = _ratio_count(x, k + 1)  # holder counts i = 1..m satisfy i/(k+1) <= x
        if m >= 1:
            terms.append(poisson_pmf(mean, k) * float(pmf[:m].sum()))
    return min(1.0, math.fsum(terms))
