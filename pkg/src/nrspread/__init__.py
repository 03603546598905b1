"""Message spreading on Norros-Reittu preferential-attachment multigraphs.

Core layers:
  capacity   heavy-tailed node capacities and their running totals
  evolution  multigraph growth (Poisson edge batches, optional deletion)
  spreading  message propagation along new edges, trajectory runner
  clock      Poisson observation clock
  analytics  exact distributions (Poisson-binomial, horizon mixtures, ratios)
  harness    sweep orchestration, CSV outputs, analytic-vs-MC comparison
  service    FastAPI app exposing the same operations over HTTP
"""

from .capacity import (
    CapacityLaw,
    CapacitySequence,
    extend_sequence,
    sample_capacity,
    sample_capacity_block,
    sequence_from_law,
)
from .clock import ClockParams, poisson_pmf, sample_step_count, truncation_index
from .errors import ConfigError, NumericalFailureError
from .evolution import (
    MultiGraphState,
    NewEdgeReport,
    draw_new_edges,
    evolve_step,
    init_graph,
    write_snapshot,
)
from .spreading import (
    BERNOULLI,
    EDGE_EXACT,
    PROPAGATION_MODES,
    MessageState,
    SuccessProbabilityTrace,
    TrajectoryRecord,
    propagate_step,
    run_fixed_capacity_batch,
    run_trajectory,
    success_probability,
)
from .analytics import (
    DiscreteDistribution,
    constant_trace,
    frozen_path_trace,
    node_count_pmf,
    non_propagation_probability,
    pinned_single_source_trace,
    poisson_binomial_pmf,
    ratio_cdf,
    spread_pmf_fixed_k,
    spread_pmf_horizon,
)
from .harness import (
    AggregateCurve,
    CompareReport,
    SimulationConfig,
    aggregate_records,
    compare_analytic_empirical,
    empirical_pmf,
    expand_grid,
    replica_rng,
    run_cell,
    run_sweep,
    total_variation,
    write_analytic_outputs,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateCurve",
    "BERNOULLI",
    "CapacityLaw",
    "CapacitySequence",
    "ClockParams",
    "CompareReport",
    "ConfigError",
    "DiscreteDistribution",
    "EDGE_EXACT",
    "MessageState",
    "MultiGraphState",
    "NewEdgeReport",
    "NumericalFailureError",
    "PROPAGATION_MODES",
    "SimulationConfig",
    "SuccessProbabilityTrace",
    "TrajectoryRecord",
    "aggregate_records",
    "compare_analytic_empirical",
    "constant_trace",
    "draw_new_edges",
    "empirical_pmf",
    "evolve_step",
    "expand_grid",
    "extend_sequence",
    "frozen_path_trace",
    "init_graph",
    "node_count_pmf",
    "non_propagation_probability",
    "pinned_single_source_trace",
    "poisson_binomial_pmf",
    "poisson_pmf",
    "propagate_step",
    "ratio_cdf",
    "replica_rng",
    "run_cell",
    "run_fixed_capacity_batch",
    "run_sweep",
    "run_trajectory",
    "sample_capacity",
    "sample_capacity_block",
    "sample_step_count",
    "sequence_from_law",
    "spread_pmf_fixed_k",
    "spread_pmf_horizon",
    "success_probability",
    "total_variation",
    "truncation_index",
    "write_analytic_outputs",
    "write_snapshot",
]
