"""Explicit MILP descriptions of the routing models, plus a solution checker.

Two constraint systems are built from a compiled network: the deterministic
model over nominal travel times, and the scenario model in which routes are
shared across all sampled travel-time realizations while service times are
per-scenario, with binary scenario-ignore switches bounded in probability mass
by the reliability level `alpha`.

Every linear constraint carries a provenance tag (Eq2..Eq10 for the
deterministic system, Eq13..Eq23 for the scenario system) so checker verdicts
point at the violated constraint family.  `check_solution` evaluates an
assignment against all constraints at 1e-6 absolute tolerance; it is written
directly from the constraint list and shares no code with the route solver,
which makes it usable as an oracle against it.

One degeneracy of the equation system is worth knowing when exporting it to
an external MILP solver: time propagation forbids cycles only through their
accumulated travel time, so task nodes sharing a physical location admit a
cost-free zero-length cycle that satisfies flow conservation, pairing, and
the windows without any vehicle travelling there.  An external optimum can
therefore fall below the cheapest genuine tour on layouts with co-located
task nodes; the route solver never emits such solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import PdpNetwork
from .scenarios import ScenarioSet

CHECK_TOLERANCE = 1e-6

BINARY = "binary"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    index: tuple
    domain_tag: str


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . values  <relation>  rhs, with <relation> in {<=, =, >=}."""

    name: str
    coeffs: dict[str, float]
    relation: str
    rhs: float
    tag: str


@dataclass(frozen=True)
class BigMSet:
    """Deactivation constants, one per relaxed constraint family.

    Sized so that a deactivated constraint admits every service time inside
    the node windows: m1 (and m2) cover time propagation along an arc, m3 the
    pickup-before-delivery coupling, m4 the upper window bound.
    """

    m1: float
    m2: float
    m3: float
    m4: float


@dataclass(frozen=True)
class ConstraintSystem:
    model: str
    variables: tuple[Variable, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: dict[str, float]
    big_m: BigMSet
    vehicle_count: int
    node_count: int
    scenario_count: int

    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]

    def constraints_tagged(self, tag: str) -> list[LinearConstraint]:
        return [c for c in self.constraints if c.tag == tag]


@dataclass(frozen=True)
class Violation:
    constraint: str
    tag: str
    amount: float


@dataclass(frozen=True)
class CheckResult:
    feasible: bool
    violations: tuple[Violation, ...]


def arc_list(node_count: int) -> list[tuple[int, int]]:
    """Directed arcs of the routing graph: every ordered pair except
    self-arcs, arcs into the source (0) and arcs out of the terminal."""
    source, terminal = 0, node_count - 1
    return [
        (i, j)
        for i in range(node_count) if i != terminal
        for j in range(node_count) if j != i and j != source
    ]


def x_name(k: int, i: int, j: int) -> str:
    return f"x[{k},{i},{j}]"


def w_name(k: int, i: int, scenario: int | None = None) -> str:
    if scenario is None:
        return f"w[{k},{i}]"
    return f"w[{k},{i},{scenario}]"


def z_name(scenario: int) -> str:
    return f"z[{scenario}]"


def propagation_requirement(close_i: float, travel: float, open_j: float) -> float:
    """Smallest constant deactivating time propagation along one arc while the
    endpoint times stay inside their windows."""
    return max(0.0, close_i + travel - open_j)


def compute_big_m(network: PdpNetwork, scenarios: ScenarioSet | None) -> BigMSet:
    """Tight per-family deactivation constants for the given travel times.

    Uses the worst (element-wise maximum) travel time over the scenario set,
    or the nominal matrix when no scenarios are given.  Vacuity is guaranteed
    for service times within the node windows; m4 additionally leaves one
    worst arc of headroom above the latest window so ignored-scenario times
    may run late.
    """
    if scenarios is None:
        worst = network.travel_time
    else:
        worst = scenarios.travel_times.max(axis=0)
    a, b = network.open_time, network.close_time
    arcs = arc_list(network.size)
    m1 = max(propagation_requirement(b[i], worst[i, j], a[j]) for (i, j) in arcs)
    m3 = 0.0
    for i in network.pickups:
        m3 = max(m3, propagation_requirement(b[i], worst[i, network.delivery_of(i)],
                                             a[network.delivery_of(i)]))
    worst_arc = max(worst[i, j] for (i, j) in arcs)
    m4 = worst_arc + (float(b.max()) - float(b.min()))
    return BigMSet(m1=m1, m2=m1, m3=m3, m4=m4)


def _route_structure_constraints(network: PdpNetwork, vehicle_count: int,
                                 tags: dict[str, str]) -> list[LinearConstraint]:
    """The scenario-independent route constraints: pickup coverage, pickup and
    delivery on the same vehicle, one departure from the source and one arrival
    at the terminal per vehicle, and flow conservation at every task node."""
    nv = network.size
    arcs = arc_list(nv)
    out_arcs: dict[int, list[tuple[int, int]]] = {i: [] for i in range(nv)}
    in_arcs: dict[int, list[tuple[int, int]]] = {i: [] for i in range(nv)}
    for (i, j) in arcs:
        out_arcs[i].append((i, j))
        in_arcs[j].append((i, j))

    cons: list[LinearConstraint] = []
    vehicles = range(vehicle_count)

    for i in network.pickups:
        coeffs = {x_name(k, i, j): 1.0 for k in vehicles for (_, j) in out_arcs[i]}
        cons.append(LinearConstraint(
            name=f"{tags['coverage']}[i={i}]", coeffs=coeffs, relation="=",
            rhs=1.0, tag=tags["coverage"]))

    for k in vehicles:
        for i in network.pickups:
            coeffs: dict[str, float] = {}
            for (_, j) in out_arcs[i]:
                coeffs[x_name(k, i, j)] = coeffs.get(x_name(k, i, j), 0.0) + 1.0
            d = network.delivery_of(i)
            for (_, j) in out_arcs[d]:
                coeffs[x_name(k, d, j)] = coeffs.get(x_name(k, d, j), 0.0) - 1.0
            cons.append(LinearConstraint(
                name=f"{tags['pairing']}[k={k},i={i}]", coeffs=coeffs, relation="=",
                rhs=0.0, tag=tags["pairing"]))

    for k in vehicles:
        cons.append(LinearConstraint(
            name=f"{tags['source']}[k={k}]",
            coeffs={x_name(k, 0, j): 1.0 for (_, j) in out_arcs[0]},
            relation="=", rhs=1.0, tag=tags["source"]))
        cons.append(LinearConstraint(
            name=f"{tags['terminal']}[k={k}]",
            coeffs={x_name(k, i, network.terminal): 1.0 for (i, _) in in_arcs[network.terminal]},
            relation="=", rhs=1.0, tag=tags["terminal"]))

    for k in vehicles:
        for i in list(network.pickups) + list(network.deliveries):
            coeffs = {}
            for (_, j) in out_arcs[i]:
                coeffs[x_name(k, i, j)] = coeffs.get(x_name(k, i, j), 0.0) + 1.0
            for (j, _) in in_arcs[i]:
                coeffs[x_name(k, j, i)] = coeffs.get(x_name(k, j, i), 0.0) - 1.0
            cons.append(LinearConstraint(
                name=f"{tags['flow']}[k={k},i={i}]", coeffs=coeffs, relation="=",
                rhs=0.0, tag=tags["flow"]))

    return cons


def _distance_objective(network: PdpNetwork, vehicle_count: int) -> dict[str, float]:
    dist = network.travel_dist
    return {
        x_name(k, i, j): float(dist[i, j])
        for k in range(vehicle_count)
        for (i, j) in arc_list(network.size)
    }


def build_deterministic(network: PdpNetwork,
                        big_m: BigMSet | None = None) -> ConstraintSystem:
    """The single-realization model: minimize total travel distance subject to
    route structure, big-M time propagation, pickup-before-delivery, and the
    node time windows, all under nominal travel times.

    `big_m` overrides the computed deactivation constants (any value at least
    as large leaves integral verdicts unchanged).
    """
    nv = network.size
    vehicle_count = network.vehicle_count
    arcs = arc_list(nv)
    vehicles = range(vehicle_count)
    big_m = big_m or compute_big_m(network, None)
    d = network.travel_time
    a, b = network.open_time, network.close_time

    variables = [
        Variable(name=x_name(k, i, j), kind=BINARY, index=(k, i, j), domain_tag="Eq10")
        for k in vehicles for (i, j) in arcs
    ] + [
        Variable(name=w_name(k, i), kind=CONTINUOUS, index=(k, i), domain_tag="Eq9")
        for k in vehicles for i in range(nv)
    ]

    tags = {"coverage": "Eq2", "pairing": "Eq3", "source": "Eq4",
            "terminal": "Eq5", "flow": "Eq6"}
    cons = _route_structure_constraints(network, vehicle_count, tags)

    # w_j >= w_i + d_ij - M (1 - x_kij), written as
    # w_i - w_j + M x_kij <= M - d_ij
    for k in vehicles:
        for (i, j) in arcs:
            cons.append(LinearConstraint(
                name=f"Eq7[k={k},({i},{j})]",
                coeffs={w_name(k, i): 1.0, w_name(k, j): -1.0, x_name(k, i, j): big_m.m1},
                relation="<=", rhs=big_m.m1 - float(d[i, j]), tag="Eq7"))

    for k in vehicles:
        for i in network.pickups:
            j = network.delivery_of(i)
            cons.append(LinearConstraint(
                name=f"Eq8[k={k},i={i}]",
                coeffs={w_name(k, i): 1.0, w_name(k, j): -1.0},
                relation="<=", rhs=-float(d[i, j]), tag="Eq8"))

    for k in vehicles:
        for i in range(nv):
            cons.append(LinearConstraint(
                name=f"Eq9[k={k},i={i},lo]", coeffs={w_name(k, i): 1.0},
                relation=">=", rhs=float(a[i]), tag="Eq9"))
            cons.append(LinearConstraint(
                name=f"Eq9[k={k},i={i},hi]", coeffs={w_name(k, i): 1.0},
                relation="<=", rhs=float(b[i]), tag="Eq9"))

    return ConstraintSystem(
        model="deterministic",
        variables=tuple(variables),
        constraints=tuple(cons),
        objective=_distance_objective(network, vehicle_count),
        big_m=big_m,
        vehicle_count=vehicle_count,
        node_count=nv,
        scenario_count=0,
    )


def build_stochastic(network: PdpNetwork, scenarios: ScenarioSet, alpha: float,
                     big_m: BigMSet | None = None) -> ConstraintSystem:
    """The scenario model: routes are shared, service times are per scenario,
    and a scenario may be switched off entirely at the price of its
    probability mass, with total switched-off mass at most `alpha`.

    The lower window bound is relaxed to zero on ignored scenarios, written as
    w + a_i z >= a_i; this needs a_i >= 0, which holds by construction.
    `big_m` overrides the computed deactivation constants.
    """
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if abs(float(scenarios.probabilities.sum()) - 1.0) > 1e-9:
        raise ValueError("scenario probabilities must sum to 1")

    nv = network.size
    vehicle_count = network.vehicle_count
    arcs = arc_list(nv)
    vehicles = range(vehicle_count)
    count = scenarios.count
    big_m = big_m or compute_big_m(network, scenarios)
    a, b = network.open_time, network.close_time
    p = scenarios.probabilities

    variables = [
        Variable(name=x_name(k, i, j), kind=BINARY, index=(k, i, j), domain_tag="Eq22")
        for k in vehicles for (i, j) in arcs
    ] + [
        Variable(name=w_name(k, i, s), kind=CONTINUOUS, index=(k, i, s), domain_tag="Eq20")
        for k in vehicles for i in range(nv) for s in range(count)
    ] + [
        Variable(name=z_name(s), kind=BINARY, index=(s,), domain_tag="Eq23")
        for s in range(count)
    ]

    tags = {"coverage": "Eq13", "pairing": "Eq14", "source": "Eq15",
            "terminal": "Eq16", "flow": "Eq17"}
    cons = _route_structure_constraints(network, vehicle_count, tags)

    # w_js >= w_is + d_ijs - M1 (1 - x_kij) - M2 z_s, written as
    # w_is - w_js + M1 x_kij - M2 z_s <= M1 - d_ijs
    for k in vehicles:
        for (i, j) in arcs:
            for s in range(count):
                d_ijs = float(scenarios.travel_times[s, i, j])
                cons.append(LinearConstraint(
                    name=f"Eq18[k={k},({i},{j}),s={s}]",
                    coeffs={w_name(k, i, s): 1.0, w_name(k, j, s): -1.0,
                            x_name(k, i, j): big_m.m1, z_name(s): -big_m.m2},
                    relation="<=", rhs=big_m.m1 - d_ijs, tag="Eq18"))

    # w_is + d_(i,i+n)s <= w_(i+n)s + M3 z_s
    for k in vehicles:
        for i in network.pickups:
            j = network.delivery_of(i)
            for s in range(count):
                d_ijs = float(scenarios.travel_times[s, i, j])
                cons.append(LinearConstraint(
                    name=f"Eq19[k={k},i={i},s={s}]",
                    coeffs={w_name(k, i, s): 1.0, w_name(k, j, s): -1.0,
                            z_name(s): -big_m.m3},
                    relation="<=", rhs=-d_ijs, tag="Eq19"))

    # a_i (1 - z_s) <= w_is <= b_i + M4 z_s
    for k in vehicles:
        for i in range(nv):
            for s in range(count):
                cons.append(LinearConstraint(
                    name=f"Eq20[k={k},i={i},s={s},lo]",
                    coeffs={w_name(k, i, s): 1.0, z_name(s): float(a[i])},
                    relation=">=", rhs=float(a[i]), tag="Eq20"))
                cons.append(LinearConstraint(
                    name=f"Eq20[k={k},i={i},s={s},hi]",
                    coeffs={w_name(k, i, s): 1.0, z_name(s): -big_m.m4},
                    relation="<=", rhs=float(b[i]), tag="Eq20"))

    cons.append(LinearConstraint(
        name="Eq21",
        coeffs={z_name(s): float(p[s]) for s in range(count)},
        relation="<=", rhs=float(alpha), tag="Eq21"))

    return ConstraintSystem(
        model="stochastic",
        variables=tuple(variables),
        constraints=tuple(cons),
        objective=_distance_objective(network, vehicle_count),
        big_m=big_m,
        vehicle_count=vehicle_count,
        node_count=nv,
        scenario_count=count,
    )


def check_solution(system: ConstraintSystem, assignment: dict[str, float],
                   tolerance: float = CHECK_TOLERANCE) -> CheckResult:
    """Evaluate every constraint of `system` at `assignment`.

    The assignment must cover every declared variable; a missing one raises
    ValueError naming it.  Binary variables must sit within tolerance of 0 or
    1 (reported under their domain tag).  Returns all violations with their
    provenance tags and the violated amount.
    """
    for var in system.variables:
        if var.name not in assignment:
            raise ValueError(f"assignment is missing variable {var.name}")

    violations: list[Violation] = []
    for var in system.variables:
        value = assignment[var.name]
        if var.kind == BINARY:
            off = min(abs(value), abs(value - 1.0))
            if off > tolerance:
                violations.append(Violation(
                    constraint=f"domain[{var.name}]", tag=var.domain_tag, amount=off))

    for con in system.constraints:
        total = 0.0
        for name, coef in con.coeffs.items():
            if name not in assignment:
                raise ValueError(f"assignment is missing variable {name}")
            total += coef * assignment[name]
        residual = total - con.rhs
        if con.relation == "<=":
            bad = residual > tolerance
            amount = residual
        elif con.relation == ">=":
            bad = residual < -tolerance
            amount = -residual
        elif con.relation == "=":
            bad = abs(residual) > tolerance
            amount = abs(residual)
        else:
            raise ValueError(f"unknown relation {con.relation!r} in {con.name}")
        if bad:
            violations.append(Violation(constraint=con.name, tag=con.tag, amount=amount))

    return CheckResult(feasible=not violations, violations=tuple(violations))


def objective_value(system: ConstraintSystem, assignment: dict[str, float]) -> float:
    return sum(coef * assignment[name] for name, coef in system.objective.items())


def _lp_ident(name: str) -> str:
    out = name
    for ch, repl in (("[", "_"), ("]", ""), (",", "_"), ("(", ""), (")", ""), ("=", "")):
        out = out.replace(ch, repl)
    return out


def write_lp_text(system: ConstraintSystem) -> str:
    """Render the system in LP interchange format for external cross-checks."""
    lines = ["Minimize", " obj:"]
    terms = [f" {coef:+.12g} {_lp_ident(name)}" for name, coef in system.objective.items()]
    for start in range(0, len(terms), 8):
        lines.append("  " + "".join(terms[start:start + 8]))
    lines.append("Subject To")
    rel_map = {"<=": "<=", ">=": ">=", "=": "="}
    for idx, con in enumerate(system.constraints):
        expr = "".join(
            f" {coef:+.12g} {_lp_ident(name)}" for name, coef in con.coeffs.items())
        lines.append(f" c{idx}_{_lp_ident(con.name)}: {expr} {rel_map[con.relation]} {con.rhs:.12g}")
    binaries = [v.name for v in system.variables if v.kind == BINARY]
    if binaries:
        lines.append("Binary")
        for start in range(0, len(binaries), 10):
            lines.append("  " + " ".join(_lp_ident(n) for n in binaries[start:start + 10]))
    lines.append("End")
    return "\n".join(lines) + "\n"
