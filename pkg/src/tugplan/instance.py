"""Factory layouts, transport tasks, and the compiled pickup/delivery network.

A problem is described by a layout graph (locations connected by walkable or
drivable edges, lengths in meters), a list of transport tasks (pick up at one
location after some release time, deliver to another before a deadline), a
fleet size, and a depot.  From this we derive nominal travel times at a fixed
vehicle speed and compile the routing network: node 0 is the source depot,
nodes 1..n the pickups, nodes n+1..2n the matching deliveries, node 2n+1 the
terminal depot.  Every node carries a service-time window [open, close].

All types are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


class InstanceParseError(ValueError):
    """Raised when an instance document is not syntactically valid."""


class InstanceValidationError(ValueError):
    """Raised when a parsed instance violates a structural requirement."""


@dataclass(frozen=True)
class LayoutGraph:
    """Undirected factory layout: locations plus edges with lengths in meters."""

    node_ids: tuple[str, ...]
    labels: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        if len(set(self.node_ids)) != len(self.node_ids):
            dupes = sorted({v for v in self.node_ids if self.node_ids.count(v) > 1})
            raise InstanceValidationError(f"layout.nodes: duplicate node ids {dupes}")
        if len(self.labels) != len(self.node_ids):
            raise InstanceValidationError("layout.nodes: labels must match node ids")
        known = set(self.node_ids)
        for u, v, length in self.edges:
            if u not in known:
                raise InstanceValidationError(f"layout.edges: unknown node {u!r} in edge ({u!r}, {v!r})")
            if v not in known:
                raise InstanceValidationError(f"layout.edges: unknown node {v!r} in edge ({u!r}, {v!r})")
            if not (length > 0):
                raise InstanceValidationError(
                    f"layout.edges: edge ({u!r}, {v!r}) has non-positive length {length}"
                )
        if self.node_ids and not self._connected():
            raise InstanceValidationError("layout: graph is not connected")

    def _connected(self) -> bool:
        index = {v: i for i, v in enumerate(self.node_ids)}
        adj: list[list[int]] = [[] for _ in self.node_ids]
        for u, v, _ in self.edges:
            adj[index[u]].append(index[v])
            adj[index[v]].append(index[u])
        seen = {0}
        stack = [0]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(self.node_ids)

    def label_of(self, node_id: str) -> str:
        return self.labels[self.node_ids.index(node_id)]


@dataclass(frozen=True)
class TaskSpec:
    """One transport task: pick up at `origin` after `earliest_pickup` seconds,
    deliver to `destination` before `latest_delivery` seconds."""

    task_id: str
    origin: str
    destination: str
    earliest_pickup: float
    latest_delivery: float

    def __post_init__(self):
        if self.origin == self.destination:
            raise InstanceValidationError(
                f"task {self.task_id!r}: from and to are both {self.origin!r}"
            )
        if self.earliest_pickup < 0:
            raise InstanceValidationError(
                f"task {self.task_id!r}: earliest_pickup_s must be >= 0, got {self.earliest_pickup}"
            )
        if not (self.latest_delivery > self.earliest_pickup):
            raise InstanceValidationError(
                f"task {self.task_id!r}: latest_delivery_s ({self.latest_delivery}) must exceed "
                f"earliest_pickup_s ({self.earliest_pickup})"
            )


@dataclass(frozen=True)
class PdpInstance:
    """A complete problem instance: layout, tasks, fleet, depot, speed, horizon."""

    layout: LayoutGraph
    tasks: tuple[TaskSpec, ...]
    vehicle_count: int
    depot: str
    horizon: float
    speed: float = 1.5
    notes: str = ""

    def __post_init__(self):
        if len(self.tasks) < 1:
            raise InstanceValidationError("tasks: at least one task is required")
        if self.vehicle_count < 1:
            raise InstanceValidationError(f"vehicles: must be >= 1, got {self.vehicle_count}")
        if not (self.speed > 0):
            raise InstanceValidationError(f"speed: must be > 0, got {self.speed}")
        known = set(self.layout.node_ids)
        if self.depot not in known:
            raise InstanceValidationError(f"depot: unknown location {self.depot!r}")
        for t in self.tasks:
            if t.origin not in known:
                raise InstanceValidationError(f"task {t.task_id!r}: unknown location {t.origin!r}")
            if t.destination not in known:
                raise InstanceValidationError(f"task {t.task_id!r}: unknown location {t.destination!r}")
        seen_ids = set()
        for t in self.tasks:
            if t.task_id in seen_ids:
                raise InstanceValidationError(f"tasks: duplicate task id {t.task_id!r}")
            seen_ids.add(t.task_id)
        latest = max(t.latest_delivery for t in self.tasks)
        if self.horizon < latest:
            raise InstanceValidationError(
                f"horizon: {self.horizon} is below the latest delivery deadline {latest}"
            )

    @property
    def n(self) -> int:
        return len(self.tasks)


@dataclass(frozen=True)
class PdpNetwork:
    """Compiled routing network over V = {0, .., 2n+1}.

    Node 0 and node 2n+1 are the source and terminal depots; node i in 1..n is
    the pickup of task i-1 and node i+n its delivery.  `travel_time` is the
    shortest-path time matrix in seconds (symmetric, zero diagonal, metric),
    `travel_dist` the same in meters.  `open_time`/`close_time` are the window
    bounds per node.
    """

    n: int
    vehicle_count: int
    locations: tuple[str, ...]
    labels: tuple[str, ...]
    task_ids: tuple[str, ...]
    open_time: np.ndarray
    close_time: np.ndarray
    travel_time: np.ndarray
    travel_dist: np.ndarray
    speed: float
    horizon: float

    def __post_init__(self):
        for arr in (self.open_time, self.close_time, self.travel_time, self.travel_dist):
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return 2 * self.n + 2

    @property
    def source(self) -> int:
        return 0

    @property
    def terminal(self) -> int:
        return 2 * self.n + 1

    @property
    def pickups(self) -> range:
        return range(1, self.n + 1)

    @property
    def deliveries(self) -> range:
        return range(self.n + 1, 2 * self.n + 1)

    def delivery_of(self, pickup: int) -> int:
        return pickup + self.n


def shortest_travel_matrix(layout: LayoutGraph, locations: list[str] | tuple[str, ...],
                           speed: float) -> np.ndarray:
    """Pairwise shortest-path travel times in seconds between `locations`.

    Times are shortest-path meters divided by `speed`; the result is symmetric
    with a zero diagonal and satisfies the triangle inequality.
    """
    if not (speed > 0):
        raise InstanceValidationError(f"speed: must be > 0, got {speed}")
    index = {v: i for i, v in enumerate(layout.node_ids)}
    for loc in locations:
        if loc not in index:
            raise InstanceValidationError(f"locations: unknown location {loc!r}")
    m = len(layout.node_ids)
    # Parallel edges collapse to their shortest representative (sparse-matrix
    # construction would otherwise sum duplicate entries).
    shortest_edge: dict[tuple[int, int], float] = {}
    for u, v, length in layout.edges:
        key = (min(index[u], index[v]), max(index[u], index[v]))
        if key not in shortest_edge or length < shortest_edge[key]:
            shortest_edge[key] = length
    rows, cols, vals = [], [], []
    for (i, j), length in shortest_edge.items():
        rows += [i, j]
        cols += [j, i]
        vals += [length, length]
    graph = csr_matrix((vals, (rows, cols)), shape=(m, m))
    wanted = [index[loc] for loc in locations]
    dist = dijkstra(graph, directed=False, indices=wanted)
    dist = dist[:, wanted]
    if np.isinf(dist).any():
        i, j = np.argwhere(np.isinf(dist))[0]
        raise InstanceValidationError(
            f"layout: no path between {locations[i]!r} and {locations[j]!r}"
        )
    # Parallel edges may leave tiny asymmetries in scipy's output ordering; the
    # metric itself is symmetric, so enforce it exactly.
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    return dist / speed


def build_network(instance: PdpInstance) -> PdpNetwork:
    """Compile a validated instance into the routing network.

    Pickup node i opens at the task's earliest pickup and closes at the
    horizon; delivery node i+n opens at 0 and closes at the task's latest
    delivery; both depot nodes carry [0, horizon].
    """
    n = instance.n
    locations = (
        (instance.depot,)
        + tuple(t.origin for t in instance.tasks)
        + tuple(t.destination for t in instance.tasks)
        + (instance.depot,)
    )
    labels = tuple(instance.layout.label_of(loc) for loc in locations)
    open_time = np.zeros(2 * n + 2)
    close_time = np.full(2 * n + 2, float(instance.horizon))
    for i, t in enumerate(instance.tasks):
        open_time[1 + i] = t.earliest_pickup
        close_time[1 + n + i] = t.latest_delivery
    travel_time = shortest_travel_matrix(instance.layout, locations, instance.speed)
    travel_dist = travel_time * instance.speed
    return PdpNetwork(
        n=n,
        vehicle_count=instance.vehicle_count,
        locations=locations,
        labels=labels,
        task_ids=tuple(t.task_id for t in instance.tasks),
        open_time=open_time,
        close_time=close_time,
        travel_time=travel_time,
        travel_dist=travel_dist,
        speed=instance.speed,
        horizon=float(instance.horizon),
    )


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise InstanceParseError(f"{context}: missing required key {key!r}")
    return mapping[key]


def _number(value, context: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceParseError(f"{context}: expected a number, got {value!r}")
    return float(value)


def load_instance(text: str) -> PdpInstance:
    """Parse and validate a JSON instance document.

    Expected shape::

        {
          "layout": {"nodes": ["DEP", "A", ...], "edges": [["DEP", "A", 15.0], ...]},
          "tasks": [{"id": "T1", "from": "A", "to": "B",
                     "earliest_pickup_s": 10, "latest_delivery_s": 40}, ...],
          "vehicles": 2,
          "depot": "DEP",
          "speed": 1.5,
          "horizon": 200
        }

    Layout nodes may also be given as ``[id, label]`` pairs.  `speed` defaults
    to 1.5 m/s.  Raises `InstanceParseError` for malformed documents and
    `InstanceValidationError` for structurally invalid ones, naming the
    offending field.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"instance document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceParseError("instance document must be a JSON object")

    layout_doc = _require(doc, "layout", "instance")
    if not isinstance(layout_doc, dict):
        raise InstanceParseError("layout: must be an object with 'nodes' and 'edges'")
    nodes_doc = _require(layout_doc, "nodes", "layout")
    edges_doc = _require(layout_doc, "edges", "layout")
    if not isinstance(nodes_doc, list) or not nodes_doc:
        raise InstanceParseError("layout.nodes: must be a non-empty list")
    node_ids, node_labels = [], []
    for entry in nodes_doc:
        if isinstance(entry, str):
            node_ids.append(entry)
            node_labels.append(entry)
        elif isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, str) for x in entry):
            node_ids.append(entry[0])
            node_labels.append(entry[1])
        else:
            raise InstanceParseError(f"layout.nodes: expected id or [id, label], got {entry!r}")
    if not isinstance(edges_doc, list):
        raise InstanceParseError("layout.edges: must be a list of [from, to, length_m]")
    edges = []
    for entry in edges_doc:
        if (not isinstance(entry, list) or len(entry) != 3
                or not isinstance(entry[0], str) or not isinstance(entry[1], str)):
            raise InstanceParseError(f"layout.edges: expected [from, to, length_m], got {entry!r}")
        edges.append((entry[0], entry[1], _number(entry[2], f"layout.edges[{entry[0]!r},{entry[1]!r}].length_m")))
    layout = LayoutGraph(node_ids=tuple(node_ids), labels=tuple(node_labels), edges=tuple(edges))

    tasks_doc = _require(doc, "tasks", "instance")
    if not isinstance(tasks_doc, list) or not tasks_doc:
        raise InstanceParseError("tasks: must be a non-empty list")
    tasks = []
    for pos, entry in enumerate(tasks_doc):
        if not isinstance(entry, dict):
            raise InstanceParseError(f"tasks[{pos}]: must be an object")
        ctx = f"tasks[{pos}]"
        task_id = _require(entry, "id", ctx)
        if not isinstance(task_id, str):
            raise InstanceParseError(f"{ctx}.id: must be a string")
        tasks.append(TaskSpec(
            task_id=task_id,
            origin=str(_require(entry, "from", ctx)),
            destination=str(_require(entry, "to", ctx)),
            earliest_pickup=_number(_require(entry, "earliest_pickup_s", ctx), f"{ctx}.earliest_pickup_s"),
            latest_delivery=_number(_require(entry, "latest_delivery_s", ctx), f"{ctx}.latest_delivery_s"),
        ))

    vehicles = _require(doc, "vehicles", "instance")
    if isinstance(vehicles, bool) or not isinstance(vehicles, int):
        raise InstanceParseError(f"vehicles: must be an integer, got {vehicles!r}")
    depot = _require(doc, "depot", "instance")
    if not isinstance(depot, str):
        raise InstanceParseError(f"depot: must be a location id string, got {depot!r}")
    speed = _number(doc.get("speed", 1.5), "speed")
    horizon = _number(_require(doc, "horizon", "instance"), "horizon")
    notes = doc.get("notes", "")
    if not isinstance(notes, str):
        raise InstanceParseError("notes: must be a string")

    return PdpInstance(
        layout=layout,
        tasks=tuple(tasks),
        vehicle_count=vehicles,
        depot=depot,
        speed=speed,
        horizon=horizon,
        notes=notes,
    )


def instance_to_dict(instance: PdpInstance) -> dict:
    """Inverse of `load_instance`, producing the documented JSON shape."""
    plain = all(i == l for i, l in zip(instance.layout.node_ids, instance.layout.labels))
    nodes = (list(instance.layout.node_ids) if plain
             else [[i, l] for i, l in zip(instance.layout.node_ids, instance.layout.labels)])
    out = {
        "layout": {
            "nodes": nodes,
            "edges": [[u, v, length] for u, v, length in instance.layout.edges],
        },
        "tasks": [
            {
                "id": t.task_id,
                "from": t.origin,
                "to": t.destination,
                "earliest_pickup_s": t.earliest_pickup,
                "latest_delivery_s": t.latest_delivery,
            }
            for t in instance.tasks
        ],
        "vehicles": instance.vehicle_count,
        "depot": instance.depot,
        "speed": instance.speed,
        "horizon": instance.horizon,
    }
    if instance.notes:
        out["notes"] = instance.notes
    return out
