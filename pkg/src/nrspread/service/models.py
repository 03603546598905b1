"""Request/response models for the HTTP service.

A TraceSpec is the wire form of a trace generator: success probabilities
are either pinned to a constant, listed explicitly, or derived from a
capacity sequence with the holder set pinned at node 0 (given capacities,
or sampled from a seed).
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..analytics import (TraceGenerator, constant_trace,
                         pinned_single_source_trace)
from ..capacity import CapacityLaw, CapacitySequence, sequence_from_law
from ..harness import replica_rng
from ..spreading import BERNOULLI


class TraceSpec(BaseModel):
    kind: Literal["constant", "explicit", "single_source"]
    p: Optional[float] = None
    probs: Optional[list[float]] = None
    capacities: Optional[list[float]] = None
    tau: Optional[float] = None
    x_min: float = 1.0
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.kind == "constant" and self.p is None:
            raise ValueError("constant trace requires p")
        if self.kind == "explicit" and not self.probs:
            raise ValueError("explicit trace requires probs")
        if self.kind == "single_source":
            if self.capacities is None and (self.tau is None or self.seed is None):
                raise ValueError(
                    "single_source trace requires capacities, or tau plus seed")
        return self

    def generator(self, max_step: int) -> TraceGenerator:
        """Trace generator valid for steps 1..max_step."""
        if self.kind == "constant":
            return constant_trace(self.p)
        if self.kind == "explicit":
            probs = tuple(self.probs)
            if len(probs) < max_step:
                raise ValueError(
                    f"explicit trace has {len(probs)} probabilities; "
                    f"the truncated mixture needs {max_step}")
            def gen(k: int) -> float:
                return probs[k - 1]
            return gen
        if self.capacities is not None:
            seq = CapacitySequence.from_values(self.capacities)
            if len(seq) < max_step + 1:
                raise ValueError(
                    f"capacity list covers {len(seq)} nodes; needs {max_step + 1}")
        else:
            law = CapacityLaw(tau=self.tau, x_min=self.x_min)
            seq = sequence_from_law(law, max_step + 1, replica_rng(self.seed, 0))
        return pinned_single_source_trace(seq)


class DistributionOut(BaseModel):
    support_start: int
    probs: list[float]
    deficit: float
    total_mass: float


class HealthOut(BaseModel):
    status: str


class PoissonBinomialIn(BaseModel):
    probs: list[float] = Field(min_length=1)


class SpreadFixedIn(BaseModel):
    probs: list[float] = Field(min_length=1)


class ClockIn(BaseModel):
    rate: float = 1.0
    horizon: float


class SpreadHorizonIn(BaseModel):
    trace: TraceSpec
    clock: ClockIn
    epsilon: float = 1e-10


class NonPropagationIn(BaseModel):
    capacities: list[float] = Field(min_length=2)
    K: int


class NonPropagationOut(BaseModel):
    probability: float


class NodeCountIn(BaseModel):
    clock: ClockIn
    n0: int = 1
    i_max: Optional[int] = None
    epsilon: float = 1e-10


class RatioCdfIn(BaseModel):
    trace: TraceSpec
    clock: ClockIn
    xs: list[float] = Field(min_length=1)
    epsilon: float = 1e-10
    paper_faithful: bool = False


class RatioCdfOut(BaseModel):
    xs: list[float]
    cdf: list[float]
    paper_faithful: bool


class TrajectoryIn(BaseModel):
    tau: float
    n0: int = 1
    s0: int = 1
    max_nodes: Optional[int] = None
    rate: float = 1.0
    horizon: Optional[float] = None
    seed: int = 0
    run_id: int = 0
    propagation_mode: str = BERNOULLI


class TrajectoryStep(BaseModel):
    k: int
    n_k: int
    s_k: int
    ratio: float
    p_k: Optional[float]


class TrajectoryOut(BaseModel):
    run_id: int
    tau: float
    n0: int
    s0: int
    steps: list[TrajectoryStep]


class SweepIn(BaseModel):
    taus: list[float] = Field(min_length=1)
    n0s: list[int] = Field(min_length=1)
    s0s: list[int] = Field(min_length=1)
    max_nodes: int = 3000
    runs: int = 20
    seed: int = 0
    propagation_mode: str = BERNOULLI
    out_dir: Optional[str] = None
    workers: int = 1


class CurveOut(BaseModel):
    tau: float
    n0: int
    s0: int
    n_values: list[int]
    mean_ratio: list[float]
    count: list[int]
    stderr: list[float]


class SweepOut(BaseModel):
    curves: list[CurveOut]
    files: list[str]
    errors: list[str]


class CompareIn(BaseModel):
    tau: float = 2.5
    n0: int = 1
    s0: int = 1
    clock: ClockIn
    replicas: int = 100_000
    seed: int = 0
    epsilon: float = 1e-10


class CompareOut(BaseModel):
    mean_steps: float
    replicas: int
    node_count_tv: float
    spread_tv: float
    truncation_deficit: float


class SnapshotIn(BaseModel):
    tau: float
    nodes: int = Field(ge=1)
    s0: int = 1
    seed: int = 0
    delete_old_edges: bool = False


class SnapshotNode(BaseModel):
    i: int
    capacity: float
    has_message: bool


class SnapshotEdge(BaseModel):
    i: int
    j: int
    count: int


class SnapshotOut(BaseModel):
    nodes: list[SnapshotNode]
    edges: list[SnapshotEdge]
