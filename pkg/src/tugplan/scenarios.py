"""Sampled travel-time disturbances.

Each scenario perturbs every undirected arc of the routing network with an
independent positive multiplier drawn from a Normal(1, std 0.5) truncated at
zero by resampling.  Scenario sets carry uniform probabilities (sample-average
style) and full provenance (config, seed, generator name) so they can be
regenerated or replayed bit-identically.

Note on the truncation: discarding non-positive draws shifts the multiplier
mean up to 1 + 0.5*phi(2)/Phi(2) = 1.0276 (phi/Phi the standard normal pdf/cdf)
and shrinks its standard deviation to about 0.471.  The raw probability of a
non-positive draw is Phi(-2) = 0.0228.  We keep the stated distribution rather
than renormalizing the mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import PdpNetwork

# numpy PCG64 seeded through SeedSequence([seed, stream...]); recorded in
# provenance so sets are reproducible across machines and worker counts.
RNG_ALGORITHM = "pcg64-seedsequence"

# Stream tags keeping solve-time sampling and evaluation sampling disjoint.
SCENARIO_STREAM = 0
EVALUATION_STREAM = 1


@dataclass(frozen=True)
class ScenarioConfig:
    """Sampling parameters: Normal(mean, sqrt(variance)) multipliers,
    resampled while non-positive, `count` scenarios from `seed`."""

    count: int
    seed: int
    multiplier_mean: float = 1.0
    multiplier_variance: float = 0.25
    truncation: str = "resample-below-zero"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"scenario count must be >= 1, got {self.count}")
        if not (self.multiplier_variance > 0):
            raise ValueError(f"multiplier variance must be > 0, got {self.multiplier_variance}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.truncation != "resample-below-zero":
            raise ValueError(f"unsupported truncation mode {self.truncation!r}")


@dataclass(frozen=True)
class ScenarioSet:
    """Realized travel times per scenario.

    `multipliers[s, i, j]` scales the nominal time of arc (i, j); matrices are
    symmetric with unit diagonal.  `travel_times[s] = multipliers[s] * nominal`.
    Probabilities are uniform and sum to 1.
    """

    multipliers: np.ndarray
    travel_times: np.ndarray
    probabilities: np.ndarray
    config: ScenarioConfig | None
    seed: int | None
    algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        for arr in (self.multipliers, self.travel_times, self.probabilities):
            arr.setflags(write=False)
        if abs(float(self.probabilities.sum()) - 1.0) > 1e-9:
            raise ValueError("scenario probabilities must sum to 1")
        if not (self.multipliers > 0).all():
            raise ValueError("scenario multipliers must all be positive")
        for s in range(self.multipliers.shape[0]):
            if not np.array_equal(self.multipliers[s], self.multipliers[s].T):
                raise ValueError(f"scenario {s} multipliers are not symmetric")

    @property
    def count(self) -> int:
        return self.travel_times.shape[0]


def sample_multiplier(rng: np.random.Generator,
                      mean: float = 1.0, std: float = 0.5) -> float:
    """One positive travel-time multiplier: Normal(mean, std), redrawn while <= 0."""
    value = rng.normal(mean, std)
    while value <= 0.0:
        value = rng.normal(mean, std)
    return float(value)


def scenario_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """Generator for one scenario (or trial), independent of worker count."""
    return np.random.default_rng(np.random.SeedSequence([seed, stream, index]))


def sample_time_matrix(nominal: np.ndarray, rng: np.random.Generator,
                       mean: float = 1.0, std: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """One realization: a fresh multiplier per undirected arc, applied to both
    directions of `nominal`.  Arcs are drawn in row-major upper-triangle order."""
    nv = nominal.shape[0]
    mult = np.ones((nv, nv))
    for i in range(nv):
        for j in range(i + 1, nv):
            m = sample_multiplier(rng, mean, std)
            mult[i, j] = m
            mult[j, i] = m
    return mult, mult * nominal


def generate_scenarios(network: PdpNetwork, config: ScenarioConfig) -> ScenarioSet:
    """Sample `config.count` independent realizations of the network's travel
    times, with uniform probabilities.  Fully reproducible from the seed; each
    scenario uses its own seed-derived stream, so the result does not depend on
    generation order or parallelism."""
    std = float(np.sqrt(config.multiplier_variance))
    nv = network.size
    mults = np.empty((config.count, nv, nv))
    times = np.empty((config.count, nv, nv))
    for s in range(config.count):
        rng = scenario_rng(config.seed, SCENARIO_STREAM, s)
        mults[s], times[s] = sample_time_matrix(
            network.travel_time, rng, config.multiplier_mean, std)
    probs = np.full(config.count, 1.0 / config.count)
    return ScenarioSet(multipliers=mults, travel_times=times, probabilities=probs,
                       config=config, seed=config.seed)


def supremum_scenario(scenario_set: ScenarioSet) -> ScenarioSet:
    """Collapse a set to the single element-wise worst case.

    Any schedule feasible under the supremum times is feasible under every
    scenario in the input set.
    """
    sup_mult = scenario_set.multipliers.max(axis=0, keepdims=True).copy()
    sup_time = scenario_set.travel_times.max(axis=0, keepdims=True).copy()
    return ScenarioSet(
        multipliers=sup_mult,
        travel_times=sup_time,
        probabilities=np.array([1.0]),
        config=scenario_set.config,
        seed=scenario_set.seed,
        algorithm=scenario_set.algorithm,
    )


def single_scenario(travel_times: np.ndarray) -> ScenarioSet:
    """Wrap one fixed time matrix (typically the nominal one) as a set."""
    nominal = np.asarray(travel_times, dtype=float)
    mult = np.ones_like(nominal)
    return ScenarioSet(
        multipliers=mult[np.newaxis].copy(),
        travel_times=nominal[np.newaxis].copy(),
        probabilities=np.array([1.0]),
        config=None,
        seed=None,
        algorithm="fixed",
    )


def scenario_set_to_dict(scenario_set: ScenarioSet) -> dict:
    """JSON-compatible export: multipliers plus provenance.  Travel times are
    reconstructed against an instance's nominal matrix on import."""
    cfg = scenario_set.config
    return {
        "algorithm": scenario_set.algorithm,
        "seed": scenario_set.seed,
        "config": None if cfg is None else {
            "count": cfg.count,
            "seed": cfg.seed,
            "multiplier_mean": cfg.multiplier_mean,
            "multiplier_variance": cfg.multiplier_variance,
            "truncation": cfg.truncation,
        },
        "probabilities": scenario_set.probabilities.tolist(),
        "multipliers": scenario_set.multipliers.tolist(),
    }


def scenario_set_from_dict(doc: dict, network: PdpNetwork) -> ScenarioSet:
    """Rebuild a set exported by `scenario_set_to_dict` against `network`."""
    mults = np.asarray(doc["multipliers"], dtype=float)
    if mults.ndim != 3 or mults.shape[1:] != (network.size, network.size):
        raise ValueError(
            f"scenario multipliers have shape {mults.shape}, expected "
            f"(count, {network.size}, {network.size}) for this instance"
        )
    probs = np.asarray(doc["probabilities"], dtype=float)
    if probs.shape != (mults.shape[0],):
        raise ValueError("scenario probabilities do not match the multiplier count")
    cfg_doc = doc.get("config")
    cfg = None if cfg_doc is None else ScenarioConfig(
        count=cfg_doc["count"],
        seed=cfg_doc["seed"],
        multiplier_mean=cfg_doc["multiplier_mean"],
        multiplier_variance=cfg_doc["multiplier_variance"],
        truncation=cfg_doc["truncation"],
    )
    return ScenarioSet(
        multipliers=mults,
        travel_times=mults * network.travel_time,
        probabilities=probs,
        config=cfg,
        seed=doc.get("seed"),
        algorithm=doc.get("algorithm", RNG_ALGORITHM),
    )
