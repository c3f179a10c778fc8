"""Out-of-sample validation of fixed route plans.

A plan is executed under freshly sampled travel times with the
earliest-feasible dispatch policy: leave the depot at time zero, wait at each
node until its window opens, and serve immediately on arrival otherwise.  A
vehicle's trial fails as soon as a service time exceeds a window's closing
time; a plan's trial fails if any vehicle fails.  Trial seeds are derived from
(seed, evaluation stream, trial index), a stream disjoint from the one used
for solve-time scenario sampling, so evaluation never reuses in-sample draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import PdpNetwork
from .scenarios import (EVALUATION_STREAM, ScenarioConfig, ScenarioSet,
                        sample_time_matrix, scenario_rng)
from .solver import RoutePlan

_EPS = 1e-9

DISPATCH_POLICY = "earliest-feasible"


@dataclass(frozen=True)
class SimOutcome:
    """Result of executing one route once: ok, or the first late node."""

    ok: bool
    violated_node: int | None = None
    lateness: float = 0.0


@dataclass(frozen=True)
class EvaluationReport:
    trials: int
    seed: int
    per_vehicle_failure: tuple[float, ...]
    overall_failure: float
    per_vehicle_half_width: tuple[float, ...]
    overall_half_width: float
    policy: str = DISPATCH_POLICY

    def __post_init__(self):
        for f in self.per_vehicle_failure + (self.overall_failure,):
            if not (0.0 <= f <= 1.0):
                raise ValueError(f"failure frequency {f} outside [0, 1]")
        if self.per_vehicle_failure and self.overall_failure < max(self.per_vehicle_failure) - _EPS:
            raise ValueError("overall failure cannot be below the worst vehicle")


def simulate_route(route: tuple[int, ...] | list[int], realized_times: np.ndarray,
                   open_time: np.ndarray, close_time: np.ndarray) -> SimOutcome:
    """Run one route under one realized travel-time matrix.

    Dispatch is earliest-feasible: w_first = 0 at the source, then
    w_next = max(open_next, w_current + realized time).  Returns the first
    node whose closing time is exceeded, with its lateness, or success.
    """
    nv = realized_times.shape[0]
    for node in route:
        if not (0 <= node < nv):
            raise ValueError(f"route visits unknown node {node}")
    w = max(0.0, float(open_time[route[0]]))
    if w > close_time[route[0]] + _EPS:
        return SimOutcome(ok=False, violated_node=int(route[0]),
                          lateness=w - float(close_time[route[0]]))
    for prev, node in zip(route, route[1:]):
        w = max(float(open_time[node]), w + float(realized_times[prev, node]))
        if w > close_time[node] + _EPS:
            return SimOutcome(ok=False, violated_node=int(node),
                              lateness=w - float(close_time[node]))
    return SimOutcome(ok=True)


def _wald_half_width(p_hat: float, trials: int) -> float:
    return 1.96 * float(np.sqrt(p_hat * (1.0 - p_hat) / trials))


def _routes_of(plan) -> tuple[tuple[int, ...], ...]:
    """Accept a validated plan or bare per-vehicle node sequences."""
    if isinstance(plan, RoutePlan):
        return plan.routes
    return tuple(tuple(int(v) for v in route) for route in plan)


def out_of_sample(plan, network: PdpNetwork,
                  config: ScenarioConfig) -> EvaluationReport:
    """Failure frequencies of `plan` over `config.count` fresh realizations.

    `plan` is a RoutePlan or a bare sequence of per-vehicle routes.
    Deterministic given the seed and independent of evaluation order: each
    trial draws its travel times from its own seed-derived stream.
    """
    routes = _routes_of(plan)
    trials = config.count
    std = float(np.sqrt(config.multiplier_variance))
    a, b = network.open_time, network.close_time
    fails = np.zeros(len(routes), dtype=int)
    any_fail = 0
    for t in range(trials):
        rng = scenario_rng(config.seed, EVALUATION_STREAM, t)
        _, realized = sample_time_matrix(network.travel_time, rng,
                                         config.multiplier_mean, std)
        failed_here = False
        for k, route in enumerate(routes):
            outcome = simulate_route(route, realized, a, b)
            if not outcome.ok:
                fails[k] += 1
                failed_here = True
        if failed_here:
            any_fail += 1
    per_vehicle = tuple(float(f) / trials for f in fails)
    overall = float(any_fail) / trials
    return EvaluationReport(
        trials=trials,
        seed=config.seed,
        per_vehicle_failure=per_vehicle,
        overall_failure=overall,
        per_vehicle_half_width=tuple(_wald_half_width(p, trials) for p in per_vehicle),
        overall_half_width=_wald_half_width(overall, trials),
    )


def replay_failures(plan, network: PdpNetwork,
                    scenarios: ScenarioSet) -> np.ndarray:
    """Per-vehicle failure counts of `plan` replayed on an existing scenario
    set (in-sample check; a robust plan must score zero on its own set)."""
    routes = _routes_of(plan)
    a, b = network.open_time, network.close_time
    fails = np.zeros(len(routes), dtype=int)
    for s in range(scenarios.count):
        realized = scenarios.travel_times[s]
        for k, route in enumerate(routes):
            if not simulate_route(route, realized, a, b).ok:
                fails[k] += 1
    return fails
