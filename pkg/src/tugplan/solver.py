"""Exact route solver: depth-first branch and bound over route construction.

Routes are built node by node, vehicle by vehicle, in lexicographic order
(vehicle index first, then node index).  At every partial route the earliest
feasible service times are propagated per enforced travel-time scenario; a
scenario dies the moment a window is provably missed, and a branch is pruned
once the dead probability mass exceeds the reliability level.  Distance
pruning uses the incumbent against the travelled distance plus an admissible
completion estimate (each unvisited task node must still be entered by some
arc, so the cheapest incoming arc per node is a lower bound).

Identical vehicles make plans invariant under fleet relabeling, so the search
only visits the canonical labeling in which the first pickup index of each
working vehicle increases and idle vehicles trail.  Among equal-distance
optima the lexicographically smallest plan is kept, which makes results
deterministic and independent of exploration order.

For a fixed plan the scenario switches decouple: turning a scenario off never
pays unless the plan misses one of its windows, so the optimal switch set is
exactly the set of scenarios the plan fails, and no explicit branching over
switches is needed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .formulation import ConstraintSystem, arc_list, w_name, x_name, z_name
from .instance import PdpNetwork
from .scenarios import ScenarioSet, single_scenario, supremum_scenario

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_TIME_LIMIT_INCUMBENT = "time-limit-with-incumbent"
STATUS_TIME_LIMIT_NO_INCUMBENT = "time-limit-no-incumbent"

_EPS = 1e-9
_MASS_EPS = 1e-12


@dataclass(frozen=True)
class SolveConfig:
    """alpha: allowed ignored probability mass; time_limit in seconds; seed is
    recorded for audit only (the search itself is deterministic); opt_tol > 0
    trades canonical tie-breaking for faster pruning."""

    alpha: float = 0.0
    time_limit: float = 300.0
    seed: int = 0
    opt_tol: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if self.opt_tol < 0:
            raise ValueError(f"opt_tol must be >= 0, got {self.opt_tol}")


@dataclass(frozen=True)
class RoutePlan:
    """Per-vehicle node sequences over V; every route runs source to terminal."""

    routes: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        terminal = 2 * self.n + 1
        seen: set[int] = set()
        for route in self.routes:
            if route[0] != 0 or route[-1] != terminal:
                raise ValueError(f"route {route} must start at 0 and end at {terminal}")
            onboard: set[int] = set()
            for node in route[1:-1]:
                if node in seen:
                    raise ValueError(f"node {node} visited more than once")
                seen.add(node)
                if 1 <= node <= self.n:
                    onboard.add(node)
                elif self.n + 1 <= node <= 2 * self.n:
                    if node - self.n not in onboard:
                        raise ValueError(
                            f"delivery {node} without a prior pickup on the same route")
                    onboard.remove(node - self.n)
                else:
                    raise ValueError(f"node {node} is not a task node")
            if onboard:
                raise ValueError(f"route {route} ends with undelivered pickups {sorted(onboard)}")
        missing = set(range(1, self.n + 1)) - seen
        if missing:
            raise ValueError(f"pickups {sorted(missing)} are not served by any route")

    @property
    def vehicle_count(self) -> int:
        return len(self.routes)

    def arcs(self) -> list[tuple[int, int, int]]:
        """(vehicle, from, to) for every traversed arc."""
        out = []
        for k, route in enumerate(self.routes):
            for i, j in zip(route, route[1:]):
                out.append((k, i, j))
        return out

    def distance(self, travel_dist: np.ndarray) -> float:
        return float(sum(travel_dist[i, j] for _, i, j in self.arcs()))

    def route_strings(self) -> list[str]:
        return ["-".join(str(v) for v in route) for route in self.routes]

    def label_strings(self, network: PdpNetwork) -> list[str]:
        return ["-".join(network.labels[v] for v in route) for route in self.routes]


@dataclass(frozen=True)
class Schedule:
    """Earliest-feasible service times.

    `times` has shape [vehicles, nodes] for single-realization solves and
    [vehicles, nodes, scenarios] for scenario solves; `ignored` marks the
    switched-off scenarios (None for single-realization solves).  Times for
    vehicles at nodes they do not visit are completed canonically so the full
    assignment satisfies the corresponding constraint system.
    """

    times: np.ndarray
    ignored: np.ndarray | None = None

    def __post_init__(self):
        self.times.setflags(write=False)
        if self.ignored is not None:
            self.ignored.setflags(write=False)


@dataclass(frozen=True)
class SearchStats:
    nodes_explored: int
    bound_prunes: int
    window_prunes: int


@dataclass(frozen=True)
class Solution:
    status: str
    plan: RoutePlan | None
    schedule: Schedule | None
    objective: float | None
    stats: SearchStats
    alpha: float
    infeasible_task: str | None = None
    limiting_scenarios: tuple[int, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status == STATUS_OPTIMAL


class _TimeUp(Exception):
    pass


class _SearchBase:
    """Shared setup and incumbent handling for both search engines."""

    def __init__(self, network: PdpNetwork, times: np.ndarray, probs: np.ndarray,
                 alpha: float, config: SolveConfig):
        self.network = network
        self.nv = network.size
        self.n = network.n
        self.terminal = network.terminal
        self.fleet = network.vehicle_count
        self.a = network.open_time
        self.b = network.close_time
        self.dist = network.travel_dist
        self.scen_count = times.shape[0]
        self.probs = probs
        self.alpha = alpha
        self.config = config

        # Cheapest way to enter each task node; admissible completion bound.
        self.min_in = np.zeros(self.nv)
        for v in range(1, self.terminal):
            self.min_in[v] = min(
                self.dist[i, v] for i in range(self.nv)
                if i != v and i != self.terminal)
        self.todo_full = float(self.min_in[1:self.terminal].sum())

        self.best_obj = math.inf
        self.best_plan: tuple[tuple[int, ...], ...] | None = None
        self.nodes = 0
        self.bound_prunes = 0
        self.window_prunes = 0
        self.deadline = time.monotonic() + config.time_limit
        self.timed_out = False

    def _offer(self, plan: tuple[tuple[int, ...], ...], objective: float) -> None:
        if objective < self.best_obj - _EPS:
            self.best_obj = objective
            self.best_plan = plan
        elif abs(objective - self.best_obj) <= _EPS and self.best_plan is not None:
            if plan < self.best_plan:
                self.best_plan = plan

    def stats(self) -> SearchStats:
        return SearchStats(nodes_explored=self.nodes, bound_prunes=self.bound_prunes,
                           window_prunes=self.window_prunes)


class _ScalarSearch(_SearchBase):
    """Search under a single travel-time realization (plain float arithmetic).

    Branch state (current route, onboard pickups, unvisited set, pickup
    times) lives on the instance and is mutated and undone around each
    recursive call, which keeps the hot path free of allocations.
    """

    def __init__(self, network: PdpNetwork, times: np.ndarray, probs: np.ndarray,
                 alpha: float, config: SolveConfig):
        super().__init__(network, times, probs, alpha, config)
        self.t = times[0].tolist()
        self.d = network.travel_dist.tolist()
        self.a_l = network.open_time.tolist()
        self.b_l = network.close_time.tolist()
        self.min_in_l = self.min_in.tolist()
        self.route: list[int] = [0]
        self.routes: list[tuple[int, ...]] = []
        self.onboard: list[int] = []
        self.unvisited: set[int] = set(range(1, self.n + 1))
        self.pickup_order = tuple(range(1, self.n + 1))
        self.pick_time: dict[int, float] = {}

    def run(self) -> None:
        t, a, b = self.t, self.a_l, self.b_l
        for i in range(1, self.n + 1):
            if a[i] + t[i][i + self.n] > b[i + self.n] + _EPS:
                return
        try:
            self._extend(0, 0, 0.0, 0.0, self.todo_full, 0)
        except _TimeUp:
            self.timed_out = True

    def _extend(self, k: int, cur: int, now: float,
                travelled: float, todo_bound: float, floor: int) -> None:
        self.nodes += 1
        if self.nodes % 8192 == 0 and time.monotonic() > self.deadline:
            raise _TimeUp
        if travelled + todo_bound > self.best_obj - self.config.opt_tol + _EPS:
            self.bound_prunes += 1
            return
        t, a, b = self.t, self.a_l, self.b_l
        t_cur = t[cur]
        route, onboard, unvisited = self.route, self.onboard, self.unvisited
        at_start = len(route) == 1

        for j in self.pickup_order:
            if j not in unvisited or (at_start and j <= floor):
                continue
            w = now + t_cur[j]
            if w < a[j]:
                w = a[j]
            if w > b[j] + _EPS:
                self.window_prunes += 1
                continue
            route.append(j)
            onboard.append(j)
            unvisited.remove(j)
            self.pick_time[j] = w
            self._extend(k, j, w, travelled + self.d[cur][j],
                         todo_bound - self.min_in_l[j], floor)
            del self.pick_time[j]
            unvisited.add(j)
            onboard.pop()
            route.pop()
        for i in sorted(onboard):
            j = i + self.n
            w = now + t_cur[j]
            other = self.pick_time[i] + t[i][j]
            if other > w:
                w = other
            if w < a[j]:
                w = a[j]
            if w > b[j] + _EPS:
                self.window_prunes += 1
                continue
            idx = onboard.index(i)
            route.append(j)
            del onboard[idx]
            self._extend(k, j, w, travelled + self.d[cur][j],
                         todo_bound - self.min_in_l[j], floor)
            onboard.insert(idx, i)
            route.pop()

        if onboard:
            return
        if unvisited and (k == self.fleet - 1 or at_start):
            return
        w = now + t_cur[self.terminal]
        if w < a[self.terminal]:
            w = a[self.terminal]
        if w > b[self.terminal] + _EPS:
            self.window_prunes += 1
            return
        travelled_total = travelled + self.d[cur][self.terminal]
        closed = tuple(route) + (self.terminal,)
        if not unvisited:
            full = tuple(self.routes) + (closed,) + ((0, self.terminal),) * (
                self.fleet - len(self.routes) - 1)
            self._offer(full, travelled_total)
            return
        # route[1] is this vehicle's first pickup: closing from the start node
        # with pickups left was rejected above, so the route is non-idle.
        first_pickup = route[1]
        self.routes.append(closed)
        saved_route, self.route = self.route, [0]
        self._extend(k + 1, 0, 0.0, travelled_total, todo_bound, first_pickup)
        self.route = saved_route
        self.routes.pop()


class _VectorSearch(_SearchBase):
    """Search over many realizations at once, tracking per-scenario earliest
    times and the probability mass of scenarios already failed.

    Structured like the scalar engine (mutable branch state, undone around
    recursion); the per-candidate work is vectorized over scenarios.
    """

    def __init__(self, network: PdpNetwork, times: np.ndarray, probs: np.ndarray,
                 alpha: float, config: SolveConfig):
        super().__init__(network, times, probs, alpha, config)
        # t_fs[i, j] is the contiguous per-scenario time vector of arc (i, j).
        self.t_fs = np.ascontiguousarray(times.transpose(1, 2, 0))
        self.route: list[int] = [0]
        self.routes: list[tuple[int, ...]] = []
        self.onboard: list[int] = []
        self.unvisited: set[int] = set(range(1, self.n + 1))
        self.pickup_order = tuple(range(1, self.n + 1))
        self.pick_time: dict[int, np.ndarray] = {}

    def run(self) -> None:
        pre_dead = np.zeros(self.scen_count, dtype=bool)
        for i in range(1, self.n + 1):
            j = i + self.n
            pre_dead |= self.a[i] + self.t_fs[i, j] > self.b[j] + _EPS
        mass = float(self.probs[pre_dead].sum())
        if mass > self.alpha + _MASS_EPS:
            return
        try:
            self._extend(0, 0, np.zeros(self.scen_count), ~pre_dead, mass,
                         0.0, self.todo_full, 0)
        except _TimeUp:
            self.timed_out = True

    def _step_times(self, cur_times: np.ndarray, cur: int, j: int) -> np.ndarray:
        arr = cur_times + self.t_fs[cur, j]
        if self.n < j <= 2 * self.n:
            pick = j - self.n
            arr = np.maximum(arr, self.pick_time[pick] + self.t_fs[pick, j])
        return np.maximum(arr, self.a[j])

    def _extend(self, k: int, cur: int, cur_times: np.ndarray, alive: np.ndarray,
                dead_mass: float, travelled: float, todo_bound: float,
                floor: int) -> None:
        self.nodes += 1
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            raise _TimeUp
        if travelled + todo_bound > self.best_obj - self.config.opt_tol + _EPS:
            self.bound_prunes += 1
            return

        route, onboard, unvisited = self.route, self.onboard, self.unvisited
        at_start = len(route) == 1
        candidates = [p for p in self.pickup_order
                      if p in unvisited and not (at_start and p <= floor)]
        candidates.extend(sorted(i + self.n for i in onboard))

        for j in candidates:
            new_times = self._step_times(cur_times, cur, j)
            violated = alive & (new_times > self.b[j] + _EPS)
            new_mass = dead_mass + float(self.probs[violated].sum())
            if new_mass > self.alpha + _MASS_EPS:
                self.window_prunes += 1
                continue
            new_alive = alive & ~violated
            route.append(j)
            if j <= self.n:
                onboard.append(j)
                unvisited.remove(j)
                self.pick_time[j] = new_times
            else:
                idx = onboard.index(j - self.n)
                del onboard[idx]
            self._extend(k, j, new_times, new_alive, new_mass,
                         travelled + float(self.dist[cur, j]),
                         todo_bound - float(self.min_in[j]), floor)
            if j <= self.n:
                del self.pick_time[j]
                unvisited.add(j)
                onboard.pop()
            else:
                onboard.insert(idx, j - self.n)
            route.pop()

        # Close the route at the terminal: allowed with nothing onboard, and
        # only if the remaining vehicles can still cover the remaining pickups
        # (an idle close forces all later vehicles idle by canonical labeling).
        if onboard:
            return
        if unvisited and (k == self.fleet - 1 or at_start):
            return
        new_times = self._step_times(cur_times, cur, self.terminal)
        violated = alive & (new_times > self.b[self.terminal] + _EPS)
        new_mass = dead_mass + float(self.probs[violated].sum())
        if new_mass > self.alpha + _MASS_EPS:
            self.window_prunes += 1
            return
        new_alive = alive & ~violated
        travelled_total = travelled + float(self.dist[cur, self.terminal])
        closed = tuple(route) + (self.terminal,)

        if not unvisited:
            # Remaining vehicles stay idle; the depot-to-depot hop is free in
            # both time and distance, so no window can fail on it.
            full = tuple(self.routes) + (closed,) + ((0, self.terminal),) * (
                self.fleet - len(self.routes) - 1)
            self._offer(full, travelled_total)
            return
        # route[1] is this vehicle's first pickup: closing from the start node
        # with pickups left was rejected above, so the route is non-idle.
        first_pickup = route[1]
        self.routes.append(closed)
        saved_route, self.route = self.route, [0]
        self._extend(k + 1, 0, np.zeros(self.scen_count), new_alive, new_mass,
                     travelled_total, todo_bound, first_pickup)
        self.route = saved_route
        self.routes.pop()


def propagate_route(route: tuple[int, ...], times: np.ndarray, open_time: np.ndarray,
                    close_time: np.ndarray, n: int) -> tuple[np.ndarray, bool]:
    """Earliest feasible service times along one route under one time matrix.

    Applies waiting at window openings, arc-by-arc propagation, and the direct
    pickup-to-delivery coupling.  Returns (times per route position, feasible).
    """
    w = np.zeros(len(route))
    picked: dict[int, float] = {}
    ok = True
    for pos, node in enumerate(route):
        if pos == 0:
            w[0] = max(0.0, open_time[node])
            continue
        prev = route[pos - 1]
        t = w[pos - 1] + times[prev, node]
        if n + 1 <= node <= 2 * n:
            pick = node - n
            if pick in picked:
                t = max(t, picked[pick] + times[pick, node])
        t = max(t, open_time[node])
        w[pos] = t
        if t > close_time[node] + _EPS:
            ok = False
        if 1 <= node <= n:
            picked[node] = t
    return w, ok


def _full_schedule(network: PdpNetwork, plan: RoutePlan,
                   scen_times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complete service times [K, nv, S] for a plan plus per-scenario
    feasibility.

    Visited nodes take their earliest-feasible route times.  A vehicle's time
    at a node it does not visit is completed canonically: window opening for
    pickups and depots, and the opening pushed by the direct pickup arc for
    deliveries, which satisfies the pickup-before-delivery constraint whenever
    the serving vehicle can.  Scenarios the plan fails are reported infeasible
    and their times pinned to the window openings.
    """
    scen_count = scen_times.shape[0]
    fleet = plan.vehicle_count
    nv = network.size
    n = network.n
    a, b = network.open_time, network.close_time
    w = np.empty((fleet, nv, scen_count))
    w[:] = a[np.newaxis, :, np.newaxis]
    feasible = np.ones(scen_count, dtype=bool)

    for s in range(scen_count):
        times = scen_times[s]
        for k, route in enumerate(plan.routes):
            route_w, ok = propagate_route(route, times, a, b, n)
            if not ok:
                feasible[s] = False
            for pos, node in enumerate(route):
                w[k, node, s] = route_w[pos]
        if not feasible[s]:
            w[:, :, s] = a[np.newaxis, :]
            continue
        # Canonical completion for non-visiting vehicles.
        for k in range(fleet):
            visited = set(plan.routes[k])
            for i in range(1, n + 1):
                d = i + n
                if d not in visited:
                    base = w[k, i, s]
                    w[k, d, s] = max(a[d], base + times[i, d])
    return w, feasible


def _solo_infeasible_task(network: PdpNetwork) -> str | None:
    """A task whose window cannot be met even by a dedicated vehicle under
    nominal times, if any."""
    d = network.travel_time
    a, b = network.open_time, network.close_time
    for i in network.pickups:
        dd = network.delivery_of(i)
        pick = max(a[i], d[0, i])
        drop = max(a[dd], pick + d[i, dd])
        if pick > b[i] + _EPS or drop > b[dd] + _EPS:
            return network.task_ids[i - 1]
        if drop + d[dd, network.terminal] > b[network.terminal] + _EPS:
            return network.task_ids[i - 1]
    return None


def _forced_dead_scenarios(network: PdpNetwork, scen_times: np.ndarray) -> np.ndarray:
    """Scenarios no plan can satisfy: the pickup-to-delivery coupling already
    overshoots the delivery deadline from the pickup's opening time."""
    dead = np.zeros(scen_times.shape[0], dtype=bool)
    a, b = network.open_time, network.close_time
    for i in network.pickups:
        d = network.delivery_of(i)
        dead |= a[i] + scen_times[:, i, d] > b[d] + _EPS
    return dead


def _solve(network: PdpNetwork, scen_times: np.ndarray, probs: np.ndarray,
           alpha: float, config: SolveConfig, det_schedule: bool) -> Solution:
    engine = _ScalarSearch if scen_times.shape[0] == 1 else _VectorSearch
    search = engine(network, scen_times, probs, alpha, config)
    search.run()
    stats = search.stats()

    if search.best_plan is None:
        if search.timed_out:
            return Solution(status=STATUS_TIME_LIMIT_NO_INCUMBENT, plan=None,
                            schedule=None, objective=None, stats=stats, alpha=alpha)
        limiting: tuple[int, ...] = ()
        if scen_times.shape[0] > 1 or alpha > 0:
            dead = _forced_dead_scenarios(network, scen_times)
            if float(probs[dead].sum()) > alpha + _MASS_EPS:
                limiting = tuple(int(s) for s in np.flatnonzero(dead))
        return Solution(status=STATUS_INFEASIBLE, plan=None, schedule=None,
                        objective=None, stats=stats, alpha=alpha,
                        infeasible_task=_solo_infeasible_task(network),
                        limiting_scenarios=limiting)

    plan = RoutePlan(routes=search.best_plan, n=network.n)
    w, feasible = _full_schedule(network, plan, scen_times)
    ignored = ~feasible
    assert float(probs[ignored].sum()) <= alpha + _MASS_EPS
    if det_schedule:
        schedule = Schedule(times=w[:, :, 0].copy())
    else:
        schedule = Schedule(times=w, ignored=ignored)
    status = STATUS_TIME_LIMIT_INCUMBENT if search.timed_out else STATUS_OPTIMAL
    return Solution(status=status, plan=plan, schedule=schedule,
                    objective=search.best_obj, stats=stats, alpha=alpha)


def solve_deterministic(network: PdpNetwork, config: SolveConfig | None = None) -> Solution:
    """Globally minimal total travel distance under nominal times."""
    config = config or SolveConfig()
    nominal = single_scenario(network.travel_time)
    return _solve(network, nominal.travel_times, nominal.probabilities,
                  alpha=0.0, config=config, det_schedule=True)


def solve_stochastic(network: PdpNetwork, scenarios: ScenarioSet,
                     config: SolveConfig | None = None) -> Solution:
    """Minimal-distance plan whose schedule meets every window on all
    scenarios except an ignored set of probability mass at most alpha."""
    config = config or SolveConfig()
    if abs(float(scenarios.probabilities.sum()) - 1.0) > 1e-9:
        raise ValueError("scenario probabilities must sum to 1")
    return _solve(network, scenarios.travel_times, scenarios.probabilities,
                  alpha=config.alpha, config=config, det_schedule=False)


def solve_alpha_zero_fast(network: PdpNetwork, scenarios: ScenarioSet,
                          config: SolveConfig | None = None) -> Solution:
    """Robust solve via the single element-wise worst-case realization.

    Every schedule constraint is monotone in the travel times, so a plan
    feasible under the supremum times is feasible under each sampled scenario
    individually; any plan returned here is therefore a valid zero-ignored
    solution.  The converse direction needs one schedule to absorb the worst
    case of every arc at once, whereas `solve_stochastic` may re-time each
    scenario separately, so on instances whose windows bind across multi-arc
    accumulations this path can miss plans that per-scenario re-timing saves
    (it returns a higher objective or infeasible there).  The two agree
    whenever the per-scenario optimum is itself supremum-feasible, in
    particular when binding windows sit on single legs or carry slack at
    worst-case scale.
    """
    config = config or SolveConfig()
    if config.alpha != 0.0:
        raise ValueError("the fast path requires alpha = 0")
    sup = supremum_scenario(scenarios)
    solution = _solve(network, sup.travel_times, sup.probabilities,
                      alpha=0.0, config=config, det_schedule=False)
    if solution.plan is None:
        if solution.status != STATUS_INFEASIBLE:
            return solution
        # Map the infeasibility diagnosis back to the original scenario indices.
        dead = _forced_dead_scenarios(network, scenarios.travel_times)
        limiting = tuple(int(s) for s in np.flatnonzero(dead)) if dead.any() else ()
        return Solution(status=STATUS_INFEASIBLE, plan=None, schedule=None,
                        objective=None, stats=solution.stats, alpha=0.0,
                        infeasible_task=solution.infeasible_task,
                        limiting_scenarios=limiting)
    # Report the schedule against the full scenario set, not the collapsed one.
    w, feasible = _full_schedule(network, solution.plan, scenarios.travel_times)
    return Solution(status=solution.status, plan=solution.plan,
                    schedule=Schedule(times=w, ignored=~feasible),
                    objective=solution.objective, stats=solution.stats,
                    alpha=0.0)


def assignment_from_solution(system: ConstraintSystem, network: PdpNetwork,
                             solution: Solution) -> dict[str, float]:
    """Spell a solution out as a full variable assignment for the checker."""
    if solution.plan is None or solution.schedule is None:
        raise ValueError("solution carries no plan to translate")
    plan, schedule = solution.plan, solution.schedule
    assignment: dict[str, float] = {}
    used = {(k, i, j) for k, i, j in plan.arcs()}
    for k in range(plan.vehicle_count):
        for (i, j) in arc_list(network.size):
            assignment[x_name(k, i, j)] = 1.0 if (k, i, j) in used else 0.0
    if system.model == "deterministic":
        if schedule.times.ndim != 2:
            raise ValueError("deterministic system needs a single-realization schedule")
        for k in range(plan.vehicle_count):
            for i in range(network.size):
                assignment[w_name(k, i)] = float(schedule.times[k, i])
    else:
        if schedule.times.ndim != 3 or schedule.ignored is None:
            raise ValueError("stochastic system needs a per-scenario schedule")
        count = schedule.times.shape[2]
        for k in range(plan.vehicle_count):
            for i in range(network.size):
                for s in range(count):
                    assignment[w_name(k, i, s)] = float(schedule.times[k, i, s])
        for s in range(count):
            assignment[z_name(s)] = 1.0 if schedule.ignored[s] else 0.0
    return assignment
