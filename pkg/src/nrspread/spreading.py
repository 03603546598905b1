"""Message spreading during evolution.

Only the arriving node can receive the message, and it does so exactly when
at least one of its fresh edges lands on a current holder. Conditional on
capacities and the holder set, that success has probability
1 - exp(-spread_capacity * new_capacity / total_capacity), which permits a
"bernoulli" propagation mode that never materializes edges and is
distributionally identical to consuming the actual Poisson edge draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .capacity import CapacityLaw, CapacitySequence, sample_capacity_block
from .clock import ClockParams, sample_step_count
from .errors import NumericalFailureError
from .evolution import NewEdgeReport, draw_new_edges

if TYPE_CHECKING:
    from .harness import SimulationConfig

EDGE_EXACT = "edge-exact"
BERNOULLI = "bernoulli"
PROPAGATION_MODES = (EDGE_EXACT, BERNOULLI)


@dataclass
class MessageState:
    """Holder set bookkeeping for one replica; single-owner mutable."""

    spread_count: int
    spread_capacity: float
    members: set
    node_count: int

    @classmethod
    def initial(cls, seq: CapacitySequence, n0: int, s0: int) -> "MessageState":
        if not (1 <= s0 <= n0):
            raise ValueError(f"s0 must satisfy 1 <= s0 <= n0, got s0={s0}, n0={n0}")
        members = set(range(s0))
        return cls(spread_count=s0,
                   spread_capacity=float(seq.prefix_sums[s0 - 1]),
                   members=members,
                   node_count=n0)


@dataclass(frozen=True)
class SuccessProbabilityTrace:
    """Realized per-step success probabilities p_1..p_k, each strictly in (0,1)."""

    probs: tuple

    def __post_init__(self):
        for p in self.probs:
            if not (0.0 < p < 1.0):
                raise ValueError(f"success probabilities must lie in (0, 1), got {p!r}")

    def __len__(self) -> int:
        return len(self.probs)


def success_probability(spread_capacity: float, new_capacity: float,
                        total_capacity: float) -> float:
    """1 - exp(-spread_capacity*new_capacity/total_capacity).

    Equals the product over holders of per-node no-edge probabilities, the
    exponents collapsing into the capacity sum. Strictly inside (0, 1).
    """
    for name, v in (("spread_capacity", spread_capacity),
                    ("new_capacity", new_capacity),
                    ("total_capacity", total_capacity)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
            raise ValueError(f"{name} must be finite and > 0, got {v!r}")
    # total includes both the holders and the new node; tolerate float slack
    if spread_capacity + new_capacity > total_capacity * (1.0 + 1e-9):
        raise ValueError(
            "total_capacity must cover spread_capacity plus new_capacity "
            f"(got {spread_capacity} + {new_capacity} > {total_capacity})"
        )
    p = -math.expm1(-spread_capacity * new_capacity / total_capacity)
    # the true value never reaches the endpoints; extreme capacities can
    # round there, so saturate to the nearest representable interior value
    return min(max(p, math.nextafter(0.0, 1.0)), math.nextafter(1.0, 0.0))


def propagate_step(state: MessageState, mode: str, new_capacity: float,
                   report: NewEdgeReport | None = None,
                   probability: float | None = None,
                   rng: np.random.Generator | None = None,
                   uniform: float | None = None) -> MessageState:
    """Apply one arrival to the holder set, mutating `state`.

    edge-exact: success iff `report` shows >= 1 new edge to a holder
    (multiplicity is irrelevant beyond being nonzero).
    bernoulli: success iff a uniform draw falls below `probability`.
    """
    if mode == EDGE_EXACT:
        if report is None:
            raise ValueError("edge-exact propagation requires a NewEdgeReport")
        success = any(i in state.members for i in report.counts)
    elif mode == BERNOULLI:
        if probability is None:
            raise ValueError("bernoulli propagation requires a probability")
        if uniform is None:
            if rng is None:
                raise ValueError("bernoulli propagation requires rng or uniform")
            uniform = rng.random()
        success = uniform < probability
    else:
        raise ValueError(f"unknown propagation mode {mode!r}")

    new_node = state.node_count
    state.node_count += 1
    if success:
        state.members.add(new_node)
        state.spread_count += 1
        state.spread_capacity += new_capacity
    return state


@dataclass
class TrajectoryRecord:
    """Per-step observations of one replica: k, N_k, #S_k and the realized p_k
    (p is NaN for the k=0 row)."""

    run_id: int
    tau: float
    n0: int
    s0: int
    steps: list = field(default_factory=list)

    def append(self, k: int, n_k: int, s_k: int, p_k: float) -> None:
        self.steps.append((k, n_k, s_k, p_k))

    def ratios(self):
        return [s / n for (_, n, s, _) in self.steps]

    def final_spread(self) -> int:
        return self.steps[-1][2]

    def probability_trace(self) -> SuccessProbabilityTrace:
        return SuccessProbabilityTrace(
            probs=tuple(p for (k, _, _, p) in self.steps if k > 0))

    def csv_rows(self):
        """Rows in the documented `run_id,k,N_k,S_k,ratio` schema."""
        for (k, n, s, _) in self.steps:
            yield f"{self.run_id},{k},{n},{s},{s / n:.6f}"


def _step_budget(config: "SimulationConfig", rng: np.random.Generator) -> int:
    """First-hit step budget from max_nodes and/or the Poisson clock."""
    budgets = []
    if config.max_nodes is not None:
        budgets.append(max(0, config.max_nodes - config.n0))
    if config.horizon is not None:
        clock = ClockParams(rate=config.rate, horizon=config.horizon)
        budgets.append(sample_step_count(clock, rng))
    if not budgets:
        raise ValueError("config must bound the run by max_nodes or horizon")
    return min(budgets)


def run_trajectory(config: "SimulationConfig", rng: np.random.Generator,
                   run_id: int = 0) -> TrajectoryRecord:
    """Run one replica and record (k, N_k, #S_k, p_k) per step.

    Capacities for every node the run can touch are drawn as one block up
    front (i.i.d., so distributionally identical to lazy growth); the
    uniform block for bernoulli mode follows it, which keeps replicas with
    the same stream aligned across s0 variants.
    """
    steps = _step_budget(config, rng)
    law = CapacityLaw(tau=config.tau)
    caps = sample_capacity_block(law, rng, config.n0 + steps)
    prefix = np.cumsum(caps)
    if not math.isfinite(float(prefix[-1])):
        raise NumericalFailureError(
            f"capacity prefix sum overflowed at tau={config.tau} (run {run_id})"
        )
    seq = CapacitySequence(values=tuple(caps.tolist()),
                           prefix_sums=tuple(prefix.tolist()))
    state = MessageState.initial(seq, config.n0, config.s0)

    record = TrajectoryRecord(run_id=run_id, tau=config.tau,
                              n0=config.n0, s0=config.s0)
    record.append(0, config.n0, config.s0, math.nan)

    uniforms = rng.random(steps) if config.propagation_mode == BERNOULLI else None
    for k in range(1, steps + 1):
        new_node = config.n0 + k - 1
        p_k = success_probability(state.spread_capacity, caps[new_node],
                                  prefix[new_node])
        if config.propagation_mode == BERNOULLI:
            propagate_step(state, BERNOULLI, caps[new_node],
                           probability=p_k, uniform=float(uniforms[k - 1]))
        else:
            report = draw_new_edges(seq, new_node, rng)
            propagate_step(state, EDGE_EXACT, caps[new_node], report=report)
        record.append(k, state.node_count, state.spread_count, p_k)
    return record


def run_fixed_capacity_batch(caps: np.ndarray, n0: int, s0: int, steps: int,
                             mode: str, rng: np.random.Generator,
                             replicas: int) -> np.ndarray:
    """Final #S after `steps` arrivals for `replicas` i.i.d. runs sharing a
    fixed capacity vector. Vectorized across replicas; one rng call per step.

    Returns an int array of length `replicas`. Cross-validated against the
    scalar propagate_step path in the test suite.
    """
    if mode not in PROPAGATION_MODES:
        raise ValueError(f"unknown propagation mode {mode!r}")
    caps = np.asarray(caps, dtype=float)
    if len(caps) < n0 + steps:
        raise ValueError(f"need {n0 + steps} capacities, got {len(caps)}")
    prefix = np.cumsum(caps)

    if mode == BERNOULLI:
        spread_cap = np.full(replicas, float(prefix[s0 - 1]))
        count = np.full(replicas, s0, dtype=np.int64)
        for k in range(1, steps + 1):
            idx = n0 + k - 1
            p = -np.expm1(-spread_cap * (caps[idx] / prefix[idx]))
            win = rng.random(replicas) < p
            spread_cap[win] += caps[idx]
            count[win] += 1
        return count

    member = np.zeros((replicas, n0 + steps), dtype=bool)
    member[:, :s0] = True
    for k in range(1, steps + 1):
        idx = n0 + k - 1
        lam = caps[:idx] * (caps[idx] / prefix[idx])
        draws = rng.poisson(lam, size=(replicas, idx))
        win = ((draws > 0) & member[:, :idx]).any(axis=1)
        member[win, idx] = True
    return member.sum(axis=1).astype(np.int64)
