"""Heavy-tailed node capacities: Pareto sampling and prefix-summed sequences.

Capacities are i.i.d. with survival function P{cap > x} = (x/x_min)^-(tau-1)
for x >= x_min (pure Pareto; the slowly varying factor is fixed to 1).
Every node's expected degree is proportional to its capacity, so the
prefix sums L_n = cap_0 + ... + cap_n act as the edge-intensity normalizer
throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailureError


@dataclass(frozen=True)
class CapacityLaw:
    """Pareto capacity law with tail exponent tau - 1."""

    tau: float
    x_min: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 1.0):
            raise ValueError(f"tau must be finite and > 1, got {self.tau}")
        if not (math.isfinite(self.x_min) and self.x_min >= 1.0):
            raise ValueError(f"x_min must be finite and >= 1, got {self.x_min}")

    @property
    def tail_exponent(self) -> float:
        return self.tau - 1.0

    def mean(self) -> float:
        """Analytic mean x_min*(tau-1)/(tau-2); infinite for tau in (1, 2]."""
        if self.tau <= 2.0:
            return math.inf
        return self.x_min * (self.tau - 1.0) / (self.tau - 2.0)

    def survival(self, x: float) -> float:
        if x <= self.x_min:
            return 1.0
        return (x / self.x_min) ** (-self.tail_exponent)

    def cdf(self, x: float) -> float:
        return 1.0 - self.survival(x)


def sample_capacity(law: CapacityLaw, u: float) -> float:
    """Invert the survival function at u: x_min * u^(-1/(tau-1)).

    Strictly decreasing in u; u -> 1 gives the support lower bound x_min.
    """
    if not (0.0 < u < 1.0):
        raise ValueError(f"u must lie strictly in (0, 1), got {u!r}")
    return law.x_min * u ** (-1.0 / law.tail_exponent)


def sample_capacity_block(law: CapacityLaw, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n i.i.d. capacities via the inverse-CDF transform, vectorized."""
    u = rng.random(n)
    # Generator.random can return exactly 0.0, which the inverse map rejects.
    while True:
        zero = u == 0.0
        if not zero.any():
            break
        u[zero] = rng.random(int(zero.sum()))
    # overflow to inf near tau=1 is caught downstream as a numerical failure
    with np.errstate(over="ignore"):
        return law.x_min * u ** (-1.0 / law.tail_exponent)


@dataclass(frozen=True)
class CapacitySequence:
    """Immutable capacity sequence cap_0..cap_N with prefix sums L_i."""

    values: tuple
    prefix_sums: tuple

    def __post_init__(self):
        if len(self.values) != len(self.prefix_sums):
            raise ValueError("values and prefix_sums must have equal length")
        for v in self.values:
            if not (v > 0.0):
                raise ValueError(f"capacities must be strictly positive, got {v!r}")
        if self.prefix_sums and not math.isfinite(self.prefix_sums[-1]):
            raise NumericalFailureError(
                "capacity prefix sum overflowed double precision; "
                "rerun with a larger tau or a different seed"
            )

    @classmethod
    def from_values(cls, values) -> "CapacitySequence":
        prefix = []
        total = 0.0
        for v in values:
            total += v
            prefix.append(total)
        return cls(values=tuple(float(v) for v in values), prefix_sums=tuple(prefix))

    def __len__(self) -> int:
        return len(self.values)

    def total(self, n: int | None = None) -> float:
        """L_n; defaults to the sum over the whole sequence."""
        if n is None:
            n = len(self.values) - 1
        return self.prefix_sums[n]


def extend_sequence(seq: CapacitySequence, law: CapacityLaw,
                    rng: np.random.Generator) -> CapacitySequence:
    """Append one fresh capacity draw, keeping prefix sums consistent."""
    u = rng.random()
    while u == 0.0:
        u = rng.random()
    v = sample_capacity(law, u)
    prev = seq.prefix_sums[-1] if seq.prefix_sums else 0.0
    new_total = prev + v
    if not math.isfinite(new_total):
        raise NumericalFailureError(
            f"capacity prefix sum overflowed double precision at index {len(seq)}"
        )
    return CapacitySequence(values=seq.values + (v,),
                            prefix_sums=seq.prefix_sums + (new_total,))


def sequence_from_law(law: CapacityLaw, n: int, rng: np.random.Generator) -> CapacitySequence:
    """Sample an n-term capacity sequence in one vectorized block."""
    block = sample_capacity_block(law, rng, n)
    return CapacitySequence.from_values(block.tolist())
