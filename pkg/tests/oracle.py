"""Brute-force reference solver used as a test oracle.

Tries every assignment of tasks to vehicles, every precedence-valid node
order per vehicle, and every scenario-ignore subset within the allowed mass,
scheduling each route by earliest-feasible forward propagation.  Written with
plain loops and no shared code with the package solver so the two can
cross-check each other.  Only usable at toy sizes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

MISS = 1e-9


@dataclass
class OracleResult:
    status: str                 # "optimal" | "infeasible"
    objective: float | None
    plan: tuple[tuple[int, ...], ...] | None
    ignored: tuple[int, ...] | None


def route_times_ok(route, times, open_t, close_t, n):
    """Earliest-feasible service times along `route` under one time matrix,
    honoring window openings and the direct pickup-to-delivery coupling.
    Returns (times list, all windows met)."""
    w = []
    picked = {}
    ok = True
    for pos, node in enumerate(route):
        if pos == 0:
            t = max(0.0, open_t[node])
        else:
            t = w[pos - 1] + times[route[pos - 1]][node]
            if n + 1 <= node <= 2 * n and (node - n) in picked:
                t = max(t, picked[node - n] + times[node - n][node])
            t = max(t, open_t[node])
        if t > close_t[node] + MISS:
            ok = False
        if 1 <= node <= n:
            picked[node] = t
        w.append(t)
    return w, ok


def _vehicle_orders(tasks, n):
    """All precedence-valid visit orders of the given tasks' nodes."""
    nodes = []
    for t in tasks:
        nodes.extend([t, t + n])
    seen = set()
    for perm in itertools.permutations(nodes):
        if perm in seen:
            continue
        seen.add(perm)
        pos = {node: idx for idx, node in enumerate(perm)}
        if all(pos[t] < pos[t + n] for t in tasks):
            yield perm


def enumerate_plans(n, fleet):
    """Every complete plan: a task assignment to vehicles plus a
    precedence-valid order per vehicle (all labelings, no symmetry tricks)."""
    terminal = 2 * n + 1
    task_ids = list(range(1, n + 1))
    for assignment in itertools.product(range(fleet), repeat=n):
        groups = [[] for _ in range(fleet)]
        for task, k in zip(task_ids, assignment):
            groups[k].append(task)
        per_vehicle = []
        for k in range(fleet):
            if groups[k]:
                per_vehicle.append([(0,) + order + (terminal,)
                                    for order in _vehicle_orders(groups[k], n)])
            else:
                per_vehicle.append([(0, terminal)])
        for combo in itertools.product(*per_vehicle):
            yield tuple(combo)


def plan_distance(plan, dist):
    total = 0.0
    for route in plan:
        for u, v in zip(route, route[1:]):
            total += dist[u][v]
    return total


def plan_scenario_feasible(plan, times, open_t, close_t, n):
    """True when every route of the plan meets all windows under `times`."""
    for route in plan:
        _, ok = route_times_ok(route, times, open_t, close_t, n)
        if not ok:
            return False
    return True


def oracle_solve(network, scenario_times, probabilities, alpha):
    """Reference optimum: minimal distance over all plans admitting an ignore
    subset of mass <= alpha covering every scenario the plan fails.  Ties are
    broken toward the plan whose sorted route tuple is lexicographically
    smallest, matching the planner's canonical labeling."""
    n = network.n
    dist = network.travel_dist.tolist()
    open_t = network.open_time.tolist()
    close_t = network.close_time.tolist()
    scen = [m.tolist() for m in np.asarray(scenario_times)]
    probs = list(probabilities)
    count = len(scen)

    best = None  # (objective, canonical plan, ignored tuple)
    for plan in enumerate_plans(n, network.vehicle_count):
        feasible_mask = [plan_scenario_feasible(plan, scen[s], open_t, close_t, n)
                         for s in range(count)]
        chosen = None
        for bits in itertools.product((0, 1), repeat=count):
            mass = sum(p for p, b in zip(probs, bits) if b)
            if mass > alpha + 1e-12:
                continue
            if all(b or feasible_mask[s] for s, b in enumerate(bits)):
                ignored = tuple(s for s, b in enumerate(bits) if b)
                if chosen is None or len(ignored) < len(chosen):
                    chosen = ignored
        if chosen is None:
            continue
        canonical = tuple(sorted(plan))
        objective = plan_distance(plan, dist)
        key = (objective, canonical)
        if best is None or objective < best[0] - MISS or (
                abs(objective - best[0]) <= MISS and canonical < best[1]):
            best = (objective, canonical, chosen)

    if best is None:
        return OracleResult(status="infeasible", objective=None, plan=None, ignored=None)
    return OracleResult(status="optimal", objective=best[0], plan=best[1], ignored=best[2])


def oracle_solve_deterministic(network):
    nominal = [network.travel_time]
    return oracle_solve(network, nominal, [1.0], 0.0)
