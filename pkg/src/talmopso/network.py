"""Cell topology, UE population and fluid-flow mobility.

Cells sit on an offset-row (pointy-top) hexagonal grid and are numbered
row-major starting at 0. Mobility is a per-UE transition-rate matrix built
from the fluid-flow boundary crossing rate of each cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """Raised when a network or optimizer configuration is inconsistent."""


@dataclass(frozen=True)
class NetworkConfig:
    num_cells: int = 30
    num_lists: int = 10
    list_size: int = 16
    max_offdiag: int | None = None
    users_per_cell: float | tuple[float, ...] = 100.0
    paging_rate: float = 0.05
    cell_radius: float = 500.0
    speed_range: tuple[float, float] = (0.0, 8.0)
    tau_cost: float = 1.0
    relocation_cost: float = 1.0
    paging_cost: float = 1.0
    grid_rows: int = 5
    grid_cols: int = 6

    def __post_init__(self):
        if self.max_offdiag is None:
            object.__setattr__(self, "max_offdiag", self.list_size * (self.list_size - 1))
        if isinstance(self.users_per_cell, (list, np.ndarray)):
            object.__setattr__(self, "users_per_cell", tuple(float(u) for u in self.users_per_cell))
        object.__setattr__(self, "speed_range", tuple(float(s) for s in self.speed_range))
        self.validate()

    def validate(self) -> None:
        n = self.num_cells
        if n < 2:
            raise ConfigError(f"num_cells must be >= 2, got {n}")
        if not 1 <= self.list_size < n:
            raise ConfigError(f"list_size must satisfy 1 <= list_size < num_cells ({n}), got {self.list_size}")
        if self.num_lists < 1:
            raise ConfigError(f"num_lists must be >= 1, got {self.num_lists}")
        if self.grid_rows * self.grid_cols != n:
            raise ConfigError(
                f"grid_rows*grid_cols = {self.grid_rows}*{self.grid_cols} does not match num_cells = {n}"
            )
        need = self.list_size * (self.list_size - 1)
        if self.max_offdiag < need:
            raise ConfigError(f"max_offdiag must be >= list_size*(list_size-1) = {need}, got {self.max_offdiag}")
        if isinstance(self.users_per_cell, tuple) and len(self.users_per_cell) != n:
            raise ConfigError(f"users_per_cell has {len(self.users_per_cell)} entries, expected {n}")
        for name in ("paging_rate", "cell_radius", "tau_cost", "relocation_cost", "paging_cost"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if np.any(self.users() < 0):
            raise ConfigError("users_per_cell must be >= 0")
        lo, hi = self.speed_range
        if lo < 0 or lo > hi:
            raise ConfigError(f"speed_range must satisfy 0 <= lo <= hi, got {self.speed_range}")

    def users(self) -> np.ndarray:
        """UE count per cell as a length-N float array."""
        if isinstance(self.users_per_cell, tuple):
            return np.asarray(self.users_per_cell, dtype=float)
        return np.full(self.num_cells, float(self.users_per_cell))

    @property
    def num_params(self) -> int:
        return 2 * self.num_lists * self.num_cells

    def with_speed_range(self, lo: float, hi: float) -> "NetworkConfig":
        from dataclasses import replace

        return replace(self, speed_range=(lo, hi))


@dataclass(frozen=True)
class MobilityModel:
    """Per-UE neighbor transition rates plus the adjacency they live on."""

    prob: np.ndarray
    adjacency: np.ndarray
    speed: float = 0.0
    row_sums: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        prob = np.asarray(self.prob, dtype=float)
        prob.setflags(write=False)
        adj = np.asarray(self.adjacency, dtype=bool)
        adj.setflags(write=False)
        object.__setattr__(self, "prob", prob)
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "row_sums", prob.sum(axis=1))

    @classmethod
    def from_matrix(cls, prob, speed: float = 0.0) -> "MobilityModel":
        """Wrap a hand-built rate matrix; adjacency is taken as its support."""
        prob = np.asarray(prob, dtype=float)
        adj = (prob > 0) | (prob.T > 0)
        np.fill_diagonal(adj, False)
        return cls(prob=prob, adjacency=adj, speed=speed)


def hex_neighbors(row: int, col: int, rows: int, cols: int) -> list[tuple[int, int]]:
    """Grid neighbors of (row, col) in an odd-row-shifted hex layout."""
    if row % 2 == 0:
        offsets = [(0, -1), (0, 1), (-1, -1), (-1, 0), (1, -1), (1, 0)]
    else:
        offsets = [(0, -1), (0, 1), (-1, 0), (-1, 1), (1, 0), (1, 1)]
    out = []
    for dr, dc in offsets:
        r, c = row + dr, col + dc
        if 0 <= r < rows and 0 <= c < cols:
            out.append((r, c))
    return out


def build_topology(config: NetworkConfig) -> np.ndarray:
    """Boolean N x N adjacency of the hex grid described by ``config``."""
    rows, cols = config.grid_rows, config.grid_cols
    if rows * cols != config.num_cells:
        raise ConfigError(f"grid {rows}x{cols} does not hold {config.num_cells} cells")
    adj = np.zeros((config.num_cells, config.num_cells), dtype=bool)
    for r in range(rows):
        for c in range(cols):
            k = r * cols + c
            for rn, cn in hex_neighbors(r, c, rows, cols):
                adj[k, rn * cols + cn] = True
    return adj


def hex_area(side: float) -> float:
    return 3.0 * math.sqrt(3.0) / 2.0 * side**2


def crossing_rate(config: NetworkConfig, speed: float) -> np.ndarray:
    """Fluid-flow boundary crossing rate of every cell, rho * PM * v / pi.

    Density is UE_k over the hexagon area and the perimeter is 6 * side.
    Returns one rate per cell, in crossings per second.
    """
    if speed < 0:
        raise ValueError(f"speed must be >= 0, got {speed}")
    density = config.users() / hex_area(config.cell_radius)
    perimeter = 6.0 * config.cell_radius
    return density * perimeter * speed / math.pi


def build_mobility(config: NetworkConfig, speed: float, adjacency: np.ndarray | None = None,
                   cap: float = 1.0) -> MobilityModel:
    """Per-UE transition rates Prob[k, n] between adjacent cells.

    The cell outflow is divided by UE_k and split evenly over the actual
    neighbors; flow across the network boundary is dropped. Each entry is
    capped at ``cap / deg(k)`` so that row sums never exceed ``cap`` (<= 1).
    """
    if adjacency is None:
        adjacency = build_topology(config)
    adjacency = np.asarray(adjacency, dtype=bool)
    if not 0 < cap <= 1:
        raise ValueError("cap must lie in (0, 1]")
    n = config.num_cells
    prob = np.zeros((n, n))
    if speed == 0:
        return MobilityModel(prob=prob, adjacency=adjacency, speed=0.0)

    users = config.users()
    rate = crossing_rate(config, speed)
    deg = adjacency.sum(axis=1)
    for k in range(n):
        if deg[k] == 0:
            raise ConfigError(f"cell {k} has no neighbors but speed is {speed}")
        if users[k] == 0:
            continue
        per_neighbor = min(cap / deg[k], rate[k] / (users[k] * deg[k]))
        prob[k, adjacency[k]] = per_neighbor
    return MobilityModel(prob=prob, adjacency=adjacency, speed=float(speed))


def representative_speed(speed_range: tuple[float, float], mode: str = "midpoint",
                         rng: np.random.Generator | None = None) -> float:
    """Speed used to stand in for a range: its midpoint, or a uniform draw."""
    lo, hi = speed_range
    if mode == "midpoint":
        return 0.5 * (lo + hi)
    if mode == "uniform":
        if rng is None:
            raise ValueError("uniform speed sampling needs an rng")
        return float(rng.uniform(lo, hi))
    raise ValueError(f"unknown speed mode {mode!r}")
