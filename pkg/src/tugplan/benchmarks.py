"""Bundled benchmark instances.

`tri3` is a small ring layout used across the test suite.  `factory6` is a
six-task, five-vehicle shop floor with stations on a junction grid, sized so
that the cheapest nominal plan chains tasks with little slack while a robust
plan exists at a higher distance; its geometry and task list are an
approximate reconstruction of a real floor, not measured data (see the
instance's notes field).  `tri3_wide` relaxes tri3's deadlines so far that
robustness costs nothing, giving a case where the robust and nominal optima
have equal distance by construction.
"""

from __future__ import annotations

import json

from .instance import PdpInstance, load_instance


def tri3_dict() -> dict:
    return {
        "layout": {
            "nodes": ["DEP", "A", "B", "C"],
            "edges": [
                ["DEP", "A", 15.0],
                ["A", "B", 15.0],
                ["B", "C", 15.0],
                ["C", "DEP", 15.0],
            ],
        },
        "tasks": [
            {"id": "T1", "from": "A", "to": "B", "earliest_pickup_s": 10.0, "latest_delivery_s": 40.0},
            {"id": "T2", "from": "C", "to": "B", "earliest_pickup_s": 0.0, "latest_delivery_s": 50.0},
        ],
        "vehicles": 2,
        "depot": "DEP",
        "speed": 1.5,
        "horizon": 200.0,
    }


def tri3_wide_dict() -> dict:
    doc = tri3_dict()
    for task in doc["tasks"]:
        task["latest_delivery_s"] = 1000.0
    doc["horizon"] = 2000.0
    doc["notes"] = "tri3 with deadlines relaxed until robustness is free"
    return doc


def factory6_dict() -> dict:
    return {
        "layout": {
            "nodes": [
                ["J1", "1"], ["J2", "2"], ["J3", "3"], ["J4", "4"],
                ["J5", "5"], ["J6", "6"],
                ["A", "A"], ["B", "B"], ["C", "C"], ["D", "D"], ["E", "E"],
            ],
            "edges": [
                ["J1", "J2", 12.0],
                ["J2", "J3", 12.0],
                ["J3", "J4", 12.0],
                ["J4", "J1", 12.0],
                ["J3", "J5", 9.0],
                ["J5", "J6", 9.0],
                ["J6", "J4", 9.0],
                ["A", "J2", 6.0],
                ["B", "J3", 6.0],
                ["C", "J5", 6.0],
                ["D", "J6", 6.0],
                ["E", "J1", 6.0],
            ],
        },
        "tasks": [
            {"id": "T1", "from": "A", "to": "B", "earliest_pickup_s": 10.0, "latest_delivery_s": 100.0},
            {"id": "T2", "from": "C", "to": "D", "earliest_pickup_s": 0.0, "latest_delivery_s": 60.0},
            {"id": "T3", "from": "E", "to": "A", "earliest_pickup_s": 0.0, "latest_delivery_s": 85.0},
            {"id": "T4", "from": "B", "to": "A", "earliest_pickup_s": 20.0, "latest_delivery_s": 95.0},
            {"id": "T5", "from": "C", "to": "D", "earliest_pickup_s": 15.0, "latest_delivery_s": 72.0},
            {"id": "T6", "from": "E", "to": "C", "earliest_pickup_s": 0.0, "latest_delivery_s": 112.0},
        ],
        "vehicles": 5,
        "depot": "J6",
        "speed": 1.5,
        "horizon": 400.0,
        "notes": (
            "Approximate reconstruction of a small shop floor: five stations on "
            "a six-junction grid, six transport tasks, five tugger vehicles. "
            "Edge lengths and windows are plausible stand-ins, not measurements."
        ),
    }


def tri3_instance() -> PdpInstance:
    return load_instance(json.dumps(tri3_dict()))


def tri3_wide_instance() -> PdpInstance:
    return load_instance(json.dumps(tri3_wide_dict()))


def factory6_instance() -> PdpInstance:
    return load_instance(json.dumps(factory6_dict()))


BUILDERS = {
    "tri3": tri3_dict,
    "tri3_wide": tri3_wide_dict,
    "factory6": factory6_dict,
}
