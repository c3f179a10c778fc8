import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tugplan import build_network, load_instance
from tugplan.benchmarks import factory6_dict, tri3_dict, tri3_wide_dict


@pytest.fixture
def tri3_instance():
    return load_instance(json.dumps(tri3_dict()))


@pytest.fixture
def tri3_network(tri3_instance):
    return build_network(tri3_instance)


@pytest.fixture
def factory6_network():
    return build_network(load_instance(json.dumps(factory6_dict())))


@pytest.fixture
def tri3_wide_network():
    return build_network(load_instance(json.dumps(tri3_wide_dict())))


def single_task_dict(earliest=0.0, latest=200.0, horizon=200.0, vehicles=1):
    """One task A->B on the tri3 ring."""
    doc = tri3_dict()
    doc["tasks"] = [{
        "id": "T1", "from": "A", "to": "B",
        "earliest_pickup_s": earliest, "latest_delivery_s": latest,
    }]
    doc["vehicles"] = vehicles
    doc["horizon"] = horizon
    return doc


@pytest.fixture
def single_task_network():
    return build_network(load_instance(json.dumps(single_task_dict())))
