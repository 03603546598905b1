"""Poisson clock driving the evolution: step counts within a fixed horizon.

The number of evolution steps in time T* is Poisson(rate * T*). All pmf
evaluation happens in log space so that means in the hundreds survive the
factorial term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailureError


@dataclass(frozen=True)
class ClockParams:
    """Clock intensity and time horizon; mean step count is rate * horizon.

    horizon = 0 is allowed as the degenerate no-evolution case.
    """

    rate: float
    horizon: float

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ValueError(f"rate must be finite and > 0, got {self.rate}")
        if not (math.isfinite(self.horizon) and self.horizon >= 0.0):
            raise ValueError(f"horizon must be finite and >= 0, got {self.horizon}")

    @property
    def mean_steps(self) -> float:
        return self.rate * self.horizon


def poisson_pmf(mean: float, k: int) -> float:
    """P{X = k} for X ~ Poisson(mean), via exp(k*ln(mean) - mean - lgamma(k+1))."""
    if not (math.isfinite(mean) and mean >= 0.0):
        raise ValueError(f"mean must be finite and >= 0, got {mean}")
    k = int(k)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if mean == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(mean) - mean - math.lgamma(k + 1))


def sample_step_count(params: ClockParams, rng: np.random.Generator) -> int:
    """Draw K* ~ Poisson(rate * horizon)."""
    mean = params.mean_steps
    if mean == 0.0:
        return 0
    return int(rng.poisson(mean))


def truncation_index(mean: float, epsilon: float) -> int:
    """Smallest k_max whose Poisson tail P{X > k_max} falls below epsilon.

    Found by cumulative summation; the summation error (~1e-15) bounds how
    small epsilon can meaningfully be.
    """
    if not (math.isfinite(mean) and mean >= 0.0):
        raise ValueError(f"mean must be finite and >= 0, got {mean}")
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if mean == 0.0:
        return 0
    cum = 0.0
    hard_cap = int(mean + 200.0 * math.sqrt(mean + 1.0) + 1000.0)
    for k in range(hard_cap + 1):
        cum += poisson_pmf(mean, k)
        if 1.0 - cum < epsilon:
            return k
    raise NumericalFailureError(
        f"Poisson tail at mean={mean} did not reach epsilon={epsilon} "
        f"within {hard_cap} terms (epsilon below float resolution?)"
    )
