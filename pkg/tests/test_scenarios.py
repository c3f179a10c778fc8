import json

import numpy as np
import pytest
from scipy.stats import norm

from tugplan import (ScenarioConfig, ScenarioSet, build_network, generate_scenarios,
                     load_instance, sample_multiplier, scenario_set_from_dict,
                     scenario_set_to_dict, simulate_route, single_scenario,
                     supremum_scenario)

from conftest import single_task_dict


def truncated_moments(mean=1.0, std=0.5):
    """Closed-form mean and std of Normal(mean, std) conditioned on > 0."""
    a = (0.0 - mean) / std
    keep = 1.0 - norm.cdf(a)
    lam = norm.pdf(a) / keep
    t_mean = mean + std * lam
    t_var = std ** 2 * (1.0 + a * lam - lam ** 2)
    return t_mean, float(np.sqrt(t_var))


class _CountingRng:
    """Wraps a generator to count raw draws, exposing rejection frequency."""

    def __init__(self, seed):
        self.rng = np.random.default_rng(seed)
        self.calls = 0

    def normal(self, mean, std):
        self.calls += 1
        return self.rng.normal(mean, std)


class TestSampleMultiplier:
    def test_large_sample_statistics(self):
        rng = _CountingRng(1234)
        draws = np.array([sample_multiplier(rng) for _ in range(100_000)])

        assert (draws > 0).all()

        t_mean, t_std = truncated_moments()
        assert t_mean == pytest.approx(1.0276, abs=2e-3)
        assert 1.02 <= draws.mean() <= 1.04
        assert abs(draws.mean() - t_mean) < 0.005

        assert 0.46 <= draws.std(ddof=1) <= 0.50
        assert abs(draws.std(ddof=1) - t_std) < 0.005

        raw_negative_rate = (rng.calls - len(draws)) / rng.calls
        assert 0.020 <= raw_negative_rate <= 0.026
        assert norm.cdf(-2.0) == pytest.approx(0.02275, abs=1e-4)


class TestGenerateScenarios:
    def test_single_scenario_probability(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=1, seed=5))
        assert scen.probabilities.tolist() == [1.0]

    def test_seeded_determinism(self, tri3_network):
        cfg = ScenarioConfig(count=8, seed=99)
        s1 = generate_scenarios(tri3_network, cfg)
        s2 = generate_scenarios(tri3_network, cfg)
        assert np.array_equal(s1.multipliers, s2.multipliers)
        assert np.array_equal(s1.travel_times, s2.travel_times)

    def test_different_seeds_differ(self, tri3_network):
        s1 = generate_scenarios(tri3_network, ScenarioConfig(count=4, seed=1))
        s2 = generate_scenarios(tri3_network, ScenarioConfig(count=4, seed=2))
        assert not np.array_equal(s1.multipliers, s2.multipliers)

    def test_per_arc_mean_on_large_set(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=1000, seed=3))
        nv = tri3_network.size
        for i in range(nv):
            for j in range(i + 1, nv):
                mean = scen.multipliers[:, i, j].mean()
                assert 1.0 <= mean <= 1.06, (i, j, mean)

    def test_multipliers_positive_and_symmetric(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=20, seed=17))
        assert (scen.multipliers > 0).all()
        for s in range(scen.count):
            assert np.array_equal(scen.multipliers[s], scen.multipliers[s].T)
            assert np.array_equal(scen.travel_times[s], scen.travel_times[s].T)

    def test_probabilities_uniform(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=40, seed=0))
        assert np.allclose(scen.probabilities, 1 / 40)
        assert scen.probabilities.sum() == pytest.approx(1.0, abs=1e-9)


class TestSupremum:
    def _two_scenario_set(self, network, low, high):
        nv = network.size
        mults = np.ones((2, nv, nv))
        mults[0, 0, 1] = mults[0, 1, 0] = low
        mults[1, 0, 1] = mults[1, 1, 0] = high
        return ScenarioSet(
            multipliers=mults,
            travel_times=mults * network.travel_time,
            probabilities=np.array([0.5, 0.5]),
            config=None, seed=None, algorithm="fixed",
        )

    def test_max_of_two(self, tri3_network):
        scen = self._two_scenario_set(tri3_network, 0.9, 1.3)
        sup = supremum_scenario(scen)
        assert sup.count == 1
        assert sup.multipliers[0, 0, 1] == pytest.approx(1.3)
        assert sup.probabilities.tolist() == [1.0]

    def test_single_scenario_is_identity(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=1, seed=8))
        sup = supremum_scenario(scen)
        assert np.array_equal(sup.travel_times, scen.travel_times)

    def test_dominates_every_scenario(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=1000, seed=21))
        sup = supremum_scenario(scen)
        assert (sup.travel_times[0] >= scen.travel_times).all()

    def test_feasible_under_sup_implies_feasible_everywhere(self, tri3_network):
        # Any route meeting its windows under the supremum times meets them
        # under each sampled scenario (simulation is monotone in travel time).
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=25, seed=33))
        sup = supremum_scenario(scen)
        a, b = tri3_network.open_time, tri3_network.close_time
        routes = [(0, 1, 3, 5), (0, 2, 4, 5), (0, 1, 2, 3, 4, 5), (0, 2, 1, 4, 3, 5)]
        for route in routes:
            if simulate_route(route, sup.travel_times[0], a, b).ok:
                for s in range(scen.count):
                    assert simulate_route(route, scen.travel_times[s], a, b).ok


class TestRoundTrip:
    def test_export_import_identity(self, tri3_network):
        scen = generate_scenarios(tri3_network, ScenarioConfig(count=12, seed=77))
        doc = json.loads(json.dumps(scenario_set_to_dict(scen)))
        back = scenario_set_from_dict(doc, tri3_network)
        assert np.array_equal(back.multipliers, scen.multipliers)
        assert np.array_equal(back.travel_times, scen.travel_times)
        assert np.array_equal(back.probabilities, scen.probabilities)
        assert back.config == scen.config

    def test_shape_mismatch_rejected(self, tri3_network):
        doc = scenario_set_to_dict(
            generate_scenarios(tri3_network, ScenarioConfig(count=2, seed=1)))
        other = build_network(load_instance(json.dumps(single_task_dict())))
        with pytest.raises(ValueError, match="shape"):
            scenario_set_from_dict(doc, other)


def test_single_scenario_wrapper(tri3_network):
    scen = single_scenario(tri3_network.travel_time)
    assert scen.count == 1
    assert np.array_equal(scen.travel_times[0], tri3_network.travel_time)
    assert (scen.multipliers == 1.0).all()


@pytest.mark.parametrize("kwargs, message", [
    (dict(count=0, seed=1), "count"),
    (dict(count=3, seed=1, multiplier_variance=0.0), "variance"),
    (dict(count=3, seed=-4), "seed"),
    (dict(count=3, seed=1, truncation="clamp"), "truncation"),
])
def test_scenario_config_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        ScenarioConfig(**kwargs)


def test_scenario_set_rejects_nonpositive_multipliers(tri3_network):
    nv = tri3_network.size
    mults = np.ones((1, nv, nv))
    mults[0, 0, 1] = mults[0, 1, 0] = 0.0
    with pytest.raises(ValueError, match="positive"):
        ScenarioSet(multipliers=mults, travel_times=mults * tri3_network.travel_time,
                    probabilities=np.array([1.0]), config=None, seed=None)


def test_scenario_set_rejects_asymmetry(tri3_network):
    nv = tri3_network.size
    mults = np.ones((1, nv, nv))
    mults[0, 0, 1] = 2.0
    with pytest.raises(ValueError, match="symmetric"):
        ScenarioSet(multipliers=mults, travel_times=mults * tri3_network.travel_time,
                    probabilities=np.array([1.0]), config=None, seed=None)


def test_count_extension_preserves_prefix(tri3_network):
    # Each scenario draws from its own (seed, index) stream, so growing the
    # set appends scenarios without disturbing the existing ones.
    small = generate_scenarios(tri3_network, ScenarioConfig(count=5, seed=64))
    large = generate_scenarios(tri3_network, ScenarioConfig(count=12, seed=64))
    assert np.array_equal(large.multipliers[:5], small.multipliers)
