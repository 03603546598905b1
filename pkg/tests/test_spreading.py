import math

import numpy as np
import pytest

from nrspread import (BERNOULLI, EDGE_EXACT, CapacityLaw, CapacitySequence,
                      MessageState, SimulationConfig, SuccessProbabilityTrace,
                      propagate_step, replica_rng, run_fixed_capacity_batch,
                      run_trajectory, sequence_from_law, success_probability)
from nrspread.evolution import NewEdgeReport


def test_success_probability_known_value():
    assert success_probability(1.0, 1.0, 2.0) == pytest.approx(
        1.0 - math.exp(-0.5), rel=1e-12)


def test_success_probability_product_form():
    # holders with capacities 1 and 2, newcomer 1, total 5
    combined = success_probability(3.0, 1.0, 5.0)
    product = math.exp(-1.0 / 5.0) * math.exp(-2.0 / 5.0)
    assert combined == pytest.approx(1.0 - product, rel=1e-14)
    assert combined == pytest.approx(1.0 - math.exp(-3.0 / 5.0), rel=1e-14)


def test_success_probability_stays_inside_unit_interval():
    p = success_probability(1e15, 1e15, 2e15)  # exponent large enough to round to 1
    assert 0.0 < p < 1.0
    tiny = success_probability(1e-200, 1e-200, 1.0)  # product underflows to 0
    assert 0.0 < tiny < 1.0


def test_success_probability_monotone():
    base = success_probability(2.0, 1.0, 10.0)
    assert success_probability(3.0, 1.0, 10.0) > base
    assert success_probability(2.0, 2.0, 10.0) > base


def test_success_probability_rejects_bad_args():
    with pytest.raises(ValueError):
        success_probability(0.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        success_probability(1.0, -1.0, 2.0)
    with pytest.raises(ValueError):
        success_probability(1.0, math.inf, 2.0)
    with pytest.raises(ValueError):
        success_probability(5.0, 5.0, 6.0)  # total below spread + new


def test_trace_validation():
    SuccessProbabilityTrace(probs=(0.5, 0.1))
    with pytest.raises(ValueError):
        SuccessProbabilityTrace(probs=(0.5, 1.0))
    with pytest.raises(ValueError):
        SuccessProbabilityTrace(probs=(0.0,))


def test_message_state_initial():
    seq = CapacitySequence.from_values([1.0, 2.0, 4.0, 8.0])
    state = MessageState.initial(seq, 4, 2)
    assert state.spread_count == 2
    assert state.spread_capacity == 3.0
    assert state.members == {0, 1}
    assert state.node_count == 4
    with pytest.raises(ValueError):
        MessageState.initial(seq, 2, 3)


def test_propagate_step_edge_exact_rules():
    seq = CapacitySequence.from_values([1.0, 1.0, 1.0])
    state = MessageState.initial(seq, 2, 1)

    # edges only to non-members: transmission fails
    miss = NewEdgeReport(new_node=2, counts={1: 3}, self_loops=1)
    propagate_step(state, EDGE_EXACT, 1.0, report=miss)
    assert state.spread_count == 1
    assert state.node_count == 3

    # any edge to a member succeeds, multiplicity irrelevant
    state2 = MessageState.initial(seq, 2, 1)
    hit = NewEdgeReport(new_node=2, counts={0: 1, 1: 5}, self_loops=0)
    propagate_step(state2, EDGE_EXACT, 1.0, report=hit)
    assert state2.spread_count == 2
    assert state2.members == {0, 2}
    assert state2.spread_capacity == 2.0


def test_propagate_step_bernoulli_uniform():
    seq = CapacitySequence.from_values([1.0, 1.0])
    state = MessageState.initial(seq, 1, 1)
    propagate_step(state, BERNOULLI, 1.0, probability=0.7, uniform=0.69)
    assert state.spread_count == 2
    state2 = MessageState.initial(seq, 1, 1)
    propagate_step(state2, BERNOULLI, 1.0, probability=0.7, uniform=0.7)
    assert state2.spread_count == 1


def test_propagate_step_argument_errors():
    seq = CapacitySequence.from_values([1.0, 1.0])
    state = MessageState.initial(seq, 1, 1)
    with pytest.raises(ValueError):
        propagate_step(state, EDGE_EXACT, 1.0)
    with pytest.raises(ValueError):
        propagate_step(state, BERNOULLI, 1.0)
    with pytest.raises(ValueError):
        propagate_step(state, "other", 1.0)


def test_two_modes_match_at_one_step():
    # single arrival at fixed capacities: empirical success rates agree
    seq = CapacitySequence.from_values([2.0, 3.0, 1.5])
    p = success_probability(2.0, 1.5, 6.5)
    rng = replica_rng(50, 0)
    n = 20_000
    exact = 0
    for _ in range(n):
        from nrspread.evolution import draw_new_edges
        report = draw_new_edges(seq, 2, rng)
        state = MessageState.initial(seq, 2, 1)
        propagate_step(state, EDGE_EXACT, 1.5, report=report)
        exact += state.spread_count - 1
    bern = 0
    for _ in range(n):
        state = MessageState.initial(seq, 2, 1)
        propagate_step(state, BERNOULLI, 1.5, probability=p, rng=rng)
        bern += state.spread_count - 1
    se = math.sqrt(2 * p * (1 - p) / n)
    assert abs(exact / n - bern / n) < 3.0 * se


def _trajectory_config(**kwargs):
    base = dict(tau=2.5, n0=1, s0=1, max_nodes=60, runs=1, seed=8)
    base.update(kwargs)
    return SimulationConfig(**base)


def test_run_trajectory_shape():
    config = _trajectory_config(n0=5, s0=2, max_nodes=40)
    rec = run_trajectory(config, replica_rng(8, 0))
    ks = [s[0] for s in rec.steps]
    ns = [s[1] for s in rec.steps]
    ss = [s[2] for s in rec.steps]
    assert ks == list(range(36))
    assert ns == [5 + k for k in ks]
    assert ss[0] == 2
    assert math.isnan(rec.steps[0][3])
    for a, b in zip(ss, ss[1:]):
        assert b - a in (0, 1)
    for (k, n, s, p) in rec.steps[1:]:
        assert 0.0 < p < 1.0
    assert rec.final_spread() == ss[-1]


def test_run_trajectory_full_initial_coverage():
    config = _trajectory_config(n0=4, s0=4, max_nodes=30)
    rec = run_trajectory(config, replica_rng(9, 0))
    assert rec.ratios()[0] == 1.0
    assert all(0.0 < r <= 1.0 for r in rec.ratios())


def test_run_trajectory_clock_bounded():
    config = _trajectory_config(max_nodes=None, horizon=3.0, seed=10)
    lengths = {len(run_trajectory(config, replica_rng(10, rid)).steps) - 1
               for rid in range(200)}
    assert min(lengths) >= 0
    assert max(lengths) > 3  # Poisson(3) exceeds its mean with decent odds
    assert len(lengths) > 3


def test_run_trajectory_first_hit_budget():
    config = _trajectory_config(max_nodes=4, horizon=1000.0, seed=11)
    rec = run_trajectory(config, replica_rng(11, 0))
    assert rec.steps[-1][1] == 4


def test_run_trajectory_deterministic():
    config = _trajectory_config(seed=12)
    a = run_trajectory(config, replica_rng(12, 0))
    b = run_trajectory(config, replica_rng(12, 0))
    assert a.steps == b.steps


def test_trajectory_probability_trace_roundtrip():
    config = _trajectory_config(seed=13, max_nodes=20)
    rec = run_trajectory(config, replica_rng(13, 0))
    trace = rec.probability_trace()
    assert len(trace) == len(rec.steps) - 1


def test_csv_rows_format():
    config = _trajectory_config(seed=14, max_nodes=10)
    rec = run_trajectory(config, replica_rng(14, 0))
    rows = list(rec.csv_rows())
    assert len(rows) == len(rec.steps)
    first = rows[0].split(",")
    assert first[0] == "0" and first[1] == "0"
    assert first[4] == "1.000000"


def test_batch_runner_matches_scalar_path():
    seq = sequence_from_law(CapacityLaw(tau=2.5), 8, replica_rng(60, 0))
    caps = np.asarray(seq.values)
    steps = 7

    def scalar_final(rng):
        state = MessageState.initial(seq, 1, 1)
        for k in range(1, steps + 1):
            p = success_probability(state.spread_capacity, seq.values[k],
                                    seq.prefix_sums[k])
            propagate_step(state, BERNOULLI, seq.values[k], probability=p, rng=rng)
        return state.spread_count

    rng = replica_rng(60, 1)
    scalar = np.array([scalar_final(rng) for _ in range(20_000)])
    batch = run_fixed_capacity_batch(caps, 1, 1, steps, BERNOULLI,
                                     replica_rng(60, 2), 200_000)
    scalar_pmf = np.bincount(scalar, minlength=steps + 2)[1:] / len(scalar)
    batch_pmf = np.bincount(batch, minlength=steps + 2)[1:] / len(batch)
    tv = 0.5 * np.abs(scalar_pmf - batch_pmf).sum()
    assert tv < 0.02


def test_batch_runner_rejects_bad_input():
    caps = np.ones(5)
    with pytest.raises(ValueError):
        run_fixed_capacity_batch(caps, 1, 1, 10, BERNOULLI, replica_rng(0, 0), 10)
    with pytest.raises(ValueError):
        run_fixed_capacity_batch(caps, 1, 1, 4, "other", replica_rng(0, 0), 10)
