"""Multi-objective particle swarm optimizer for TAL planning.

Each particle keeps its own bounded archive of non-dominated positions; the
swarm shares a bounded global archive. Guides for the next velocity update
are the closest local/global archive pair in normalized objective space, and
the final answer is the global archive plus its fuzzy best compromise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .archive import ArchiveEntry, ParetoArchive, select_guides
from .cost import evaluate_positions
from .fuzzy import best_compromise
from .network import ConfigError, MobilityModel, NetworkConfig


@dataclass(frozen=True)
class MopsoParams:
    population: int = 200
    iterations: int = 100
    intervals: int = 5
    k1: float = 2.0
    k2: float = 2.0
    local_cap: int = 5
    global_cap: int = 10
    inertia: float = 1.0
    inertia_decay: float = 0.99
    x_min: float = 0.0
    x_max: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ConfigError(f"population must be >= 2, got {self.population}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.intervals < 1:
            raise ConfigError(f"intervals must be >= 1, got {self.intervals}")
        if self.local_cap < 1 or self.global_cap < 1:
            raise ConfigError("archive caps must be >= 1")
        if self.k1 < 0 or self.k2 < 0:
            raise ConfigError("k1 and k2 must be >= 0")
        if self.inertia < 0 or not 0 < self.inertia_decay:
            raise ConfigError("inertia must be >= 0 and inertia_decay > 0")
        if np.any(np.asarray(self.x_min) > np.asarray(self.x_max)):
            raise ConfigError("x_min must not exceed x_max")


def v_max(params: MopsoParams):
    """Velocity bound per parameter: (x_max - x_min) / intervals."""
    if params.intervals < 1:
        raise ValueError("intervals must be >= 1")
    return (np.asarray(params.x_max, dtype=float) - np.asarray(params.x_min, dtype=float)) / params.intervals


def update_inertia(alpha_prev: float, decay: float = 0.99) -> float:
    return decay * alpha_prev


def update_velocity(velocity, position, local_best, global_best, alpha: float,
                    params: MopsoParams, rng=None, r1=None, r2=None) -> np.ndarray:
    """Inertia plus cognitive and social pulls, clamped to +-v_max.

    ``r1``/``r2`` default to fresh uniform draws per component from ``rng``.
    """
    x = np.asarray(position, dtype=float)
    if r1 is None:
        r1 = rng.random(x.shape)
    if r2 is None:
        r2 = rng.random(x.shape)
    v = (alpha * np.asarray(velocity, dtype=float)
         + params.k1 * r1 * (np.asarray(local_best) - x)
         + params.k2 * r2 * (np.asarray(global_best) - x))
    vm = v_max(params)
    return np.clip(v, -vm, vm)


def update_position(position, velocity, params: MopsoParams) -> np.ndarray:
    return np.clip(np.asarray(position) + np.asarray(velocity), params.x_min, params.x_max)


@dataclass
class IterationRecord:
    iteration: int
    alpha: float
    min_j1: float
    min_j2: float
    archive_size: int
    front: list[tuple[float, float]]


@dataclass
class SwarmState:
    """Snapshot handed to the per-iteration callback. Do not mutate."""

    iteration: int
    alpha: float
    positions: np.ndarray
    velocities: np.ndarray
    objectives: np.ndarray
    local: list[ParetoArchive]
    global_archive: ParetoArchive


@dataclass
class MopsoResult:
    front: list[ArchiveEntry]
    compromise: int
    history: list[IterationRecord] = field(default_factory=list)
    evaluations: int = 0
    wall_time: float = 0.0

    @property
    def compromise_entry(self) -> ArchiveEntry:
        return self.front[self.compromise]

    def front_objectives(self) -> np.ndarray:
        return np.array([e.objectives for e in self.front], dtype=float)


def _record(t, alpha, archive: ParetoArchive) -> IterationRecord:
    obj = archive.objectives()
    return IterationRecord(
        iteration=t,
        alpha=alpha,
        min_j1=float(obj[:, 0].min()),
        min_j2=float(obj[:, 1].min()),
        archive_size=len(archive),
        front=[tuple(map(float, o)) for o in obj],
    )


def run(config: NetworkConfig, mobility: MobilityModel, params: MopsoParams,
        callback: Callable[[SwarmState], None] | None = None,
        evaluator=None) -> MopsoResult:
    """Optimize the TAL plan; returns the global front, its compromise and history.

    Each particle draws from its own child stream of ``params.seed``, so a
    run is reproducible bit for bit.
    """
    started = time.perf_counter()
    if evaluator is None:
        def evaluator(x):
            return evaluate_positions(x, mobility, config)

    pop, P = params.population, config.num_params
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(params.seed).spawn(pop)]
    vm = np.broadcast_to(v_max(params), (P,))
    lo = np.broadcast_to(np.asarray(params.x_min, dtype=float), (P,))
    hi = np.broadcast_to(np.asarray(params.x_max, dtype=float), (P,))

    # Step 1: initialization
    X = np.stack([g.uniform(lo, hi) for g in streams])
    V = np.stack([g.uniform(-vm, vm) for g in streams])
    F, power = evaluator(X)
    evaluations = pop

    local = []
    for i in range(pop):
        arch = ParetoArchive(params.local_cap)
        arch.insert(ArchiveEntry(X[i].copy(), (float(F[i, 0]), float(F[i, 1])), float(power[i])))
        local.append(arch)
    glob = ParetoArchive(params.global_cap)
    glob.extend(a.entries[0] for a in local)

    def guides():
        lb = np.empty_like(X)
        gb = np.empty_like(X)
        for i in range(pop):
            a, b = select_guides(local[i], glob)
            lb[i] = local[i].entries[a].position
            gb[i] = glob.entries[b].position
        return lb, gb

    alpha = params.inertia
    local_best, global_best = guides()
    history = [_record(1, alpha, glob)]
    if callback is not None:
        callback(SwarmState(1, alpha, X, V, F, local, glob))

    for t in range(2, params.iterations + 1):
        alpha = update_inertia(alpha, params.inertia_decay)
        r1 = np.stack([g.random(P) for g in streams])
        r2 = np.stack([g.random(P) for g in streams])
        V = update_velocity(V, X, local_best, global_best, alpha, params, r1=r1, r2=r2)
        X = update_position(X, V, params)
        F, power = evaluator(X)
        evaluations += pop

        for i in range(pop):
            local[i].insert(ArchiveEntry(X[i].copy(), (float(F[i, 0]), float(F[i, 1])), float(power[i])))
        glob.extend(e for arch in local for e in arch.entries)

        local_best, global_best = guides()
        history.append(_record(t, alpha, glob))
        if callback is not None:
            callback(SwarmState(t, alpha, X, V, F, local, glob))

    front = list(glob.entries)
    return MopsoResult(
        front=front,
        compromise=best_compromise([e.objectives for e in front]),
        history=history,
        evaluations=evaluations,
        wall_time=time.perf_counter() - started,
    )
