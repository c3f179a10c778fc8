import json

import numpy as np
import pytest
from scipy.stats import norm

from tugplan import (ScenarioConfig, SolveConfig, build_network, generate_scenarios,
                     load_instance, out_of_sample, replay_failures, simulate_route,
                     solve_deterministic, solve_stochastic)


def one_leg_network():
    """Depot at the pickup location: the only random leg runs pickup to
    delivery, and the deadline equals its nominal travel time (10 s)."""
    doc = {
        "layout": {"nodes": ["A", "B"], "edges": [["A", "B", 15.0]]},
        "tasks": [{"id": "T1", "from": "A", "to": "B",
                   "earliest_pickup_s": 0.0, "latest_delivery_s": 10.0}],
        "vehicles": 1,
        "depot": "A",
        "speed": 1.5,
        "horizon": 500.0,
    }
    return build_network(load_instance(json.dumps(doc)))


class TestSimulateRoute:
    def test_unbounded_windows_always_succeed(self, tri3_network):
        nv = tri3_network.size
        open_t = np.zeros(nv)
        close_t = np.full(nv, np.inf)
        big = np.full((nv, nv), 1e6)
        np.fill_diagonal(big, 0.0)
        outcome = simulate_route((0, 1, 2, 3, 4, 5), big, open_t, close_t)
        assert outcome.ok

    def test_lateness_reported(self, tri3_network):
        nv = tri3_network.size
        realized = tri3_network.travel_time * 1.2  # 12 s on the 10 s leg
        close_t = tri3_network.close_time.copy()
        close_t[1] = 10.0
        outcome = simulate_route((0, 1, 3, 5), realized, tri3_network.open_time, close_t)
        assert not outcome.ok
        assert outcome.violated_node == 1
        assert outcome.lateness == pytest.approx(2.0)

    def test_optimal_plan_succeeds_under_nominal(self, tri3_network):
        solution = solve_deterministic(tri3_network)
        for route in solution.plan.routes:
            outcome = simulate_route(route, tri3_network.travel_time,
                                     tri3_network.open_time, tri3_network.close_time)
            assert outcome.ok

    def test_unknown_node_rejected(self, tri3_network):
        with pytest.raises(ValueError, match="unknown node"):
            simulate_route((0, 99), tri3_network.travel_time,
                           tri3_network.open_time, tri3_network.close_time)

    def test_waits_at_window_opening(self, tri3_network):
        # Pickup 1 opens at 10 s but is 10 s away, so no wait; shrink the
        # travel time and the dispatch must still hold until the opening.
        quick = tri3_network.travel_time * 0.5
        outcome = simulate_route((0, 1, 3, 5), quick, tri3_network.open_time,
                                 tri3_network.close_time)
        assert outcome.ok


class TestOutOfSample:
    def test_idle_routes_never_fail(self, tri3_network):
        report = out_of_sample([(0, 5), (0, 5)], tri3_network,
                               ScenarioConfig(count=200, seed=3))
        assert report.per_vehicle_failure == (0.0, 0.0)
        assert report.overall_failure == 0.0

    def test_deadline_equal_leg_failure_rate(self):
        network = one_leg_network()
        report = out_of_sample([(0, 1, 2, 3)], network,
                               ScenarioConfig(count=1000, seed=2718))
        # Exceeding the deadline means the multiplier drew above 1; for the
        # zero-truncated Normal(1, 0.5) that has probability 0.5 / Phi(2).
        expected = 0.5 / norm.cdf(2.0)
        assert expected == pytest.approx(0.51164, abs=1e-4)
        assert report.per_vehicle_failure[0] == pytest.approx(expected, abs=0.05)

    def test_deadline_equal_leg_against_large_simulation(self):
        rng = np.random.default_rng(999)
        draws = rng.normal(1.0, 0.5, size=400_000)
        draws = draws[draws > 0]
        assert draws.mean() > 1.0
        assert abs((draws > 1.0).mean() - 0.5 / norm.cdf(2.0)) < 0.005

    def test_robust_plan_clean_on_own_scenarios(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=30, seed=7))
        solution = solve_stochastic(tri3_network, scen, SolveConfig(alpha=0.0))
        assert solution.status == "optimal"
        assert (replay_failures(solution.plan, tri3_network, scen) == 0).all()

    def test_report_determinism(self, tri3_network):
        solution = solve_deterministic(tri3_network)
        cfg = ScenarioConfig(count=300, seed=5)
        r1 = out_of_sample(solution.plan, tri3_network, cfg)
        r2 = out_of_sample(solution.plan, tri3_network, cfg)
        assert r1 == r2

    def test_overall_at_least_worst_vehicle(self, factory6_network):
        solution = solve_deterministic(factory6_network)
        report = out_of_sample(solution.plan, factory6_network,
                               ScenarioConfig(count=400, seed=8))
        assert report.overall_failure >= max(report.per_vehicle_failure)
        assert all(0.0 <= f <= 1.0 for f in report.per_vehicle_failure)

    def test_half_width_scales_with_trials(self):
        network = one_leg_network()
        ratios = []
        for seed in (10, 11, 12):
            small = out_of_sample([(0, 1, 2, 3)], network, ScenarioConfig(count=500, seed=seed))
            large = out_of_sample([(0, 1, 2, 3)], network, ScenarioConfig(count=2000, seed=seed))
            ratios.append(large.per_vehicle_half_width[0] / small.per_vehicle_half_width[0])
        # Quadrupling the trials halves the half-width (1/sqrt(n) scaling).
        assert np.mean(ratios) == pytest.approx(0.5, abs=0.1)

    def test_eval_stream_disjoint_from_scenario_stream(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=5, seed=42))
        report = out_of_sample([(0, 1, 3, 5)], tri3_network,
                               ScenarioConfig(count=5, seed=42))
        from tugplan.scenarios import EVALUATION_STREAM, SCENARIO_STREAM, scenario_rng
        assert SCENARIO_STREAM != EVALUATION_STREAM
        a = scenario_rng(42, SCENARIO_STREAM, 0).normal(1, 0.5)
        b = scenario_rng(42, EVALUATION_STREAM, 0).normal(1, 0.5)
        assert a != b
        assert report.trials == 5
