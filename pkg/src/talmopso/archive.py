"""Bounded non-dominated archives for two-objective minimization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


def _pair(obj) -> tuple[float, float]:
    if hasattr(obj, "j1"):
        return (obj.j1, obj.j2)
    return (obj[0], obj[1])


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` in both objectives and better in one."""
    a1, a2 = _pair(a)
    b1, b2 = _pair(b)
    return a1 <= b1 and a2 <= b2 and (a1 < b1 or a2 < b2)


def weakly_dominates(a, b) -> bool:
    a1, a2 = _pair(a)
    b1, b2 = _pair(b)
    return a1 <= b1 and a2 <= b2


def nondominated_mask(points: np.ndarray) -> np.ndarray:
    """Mask of points not dominated by any other point.

    Sort by (j1, j2, index) and sweep, keeping each point whose j2 beats
    every j2 seen so far. Among exact duplicates only the first survives.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    order = np.lexsort((np.arange(len(pts)), pts[:, 1], pts[:, 0]))
    j2 = pts[order, 1]
    best_before = np.concatenate([[np.inf], np.minimum.accumulate(j2)[:-1]])
    keep = np.zeros(len(pts), dtype=bool)
    keep[order] = j2 < best_before
    return keep


def minmax_normalize(points: np.ndarray, ref: np.ndarray | None = None) -> np.ndarray:
    """Scale each objective to [0, 1] over ``ref`` (default: ``points`` itself).

    A flat objective maps to 0.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    ref = pts if ref is None else np.asarray(ref, dtype=float).reshape(-1, 2)
    lo = ref.min(axis=0)
    span = ref.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)
    return (pts - lo) / span


@dataclass
class ArchiveEntry:
    position: np.ndarray
    objectives: tuple[float, float]
    power: float = 0.0

    @property
    def j1(self) -> float:
        return self.objectives[0]

    @property
    def j2(self) -> float:
        return self.objectives[1]


@dataclass
class ParetoArchive:
    capacity: int
    entries: list[ArchiveEntry] = field(default_factory=list)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("archive capacity must be >= 1")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def objectives(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, 2))
        return np.array([e.objectives for e in self.entries], dtype=float)

    def insert(self, entry: ArchiveEntry, reduce: bool = True) -> bool:
        """Add ``entry`` unless an existing entry weakly dominates it.

        Entries dominated by the newcomer are dropped. Returns whether the
        entry was accepted.
        """
        for e in self.entries:
            if weakly_dominates(e.objectives, entry.objectives):
                return False
        self.entries = [e for e in self.entries if not dominates(entry.objectives, e.objectives)]
        self.entries.append(entry)
        if reduce and len(self.entries) > self.capacity:
            cluster_reduce(self, self.capacity)
        return True

    def extend(self, candidates: Iterable[ArchiveEntry], reduce: bool = True) -> None:
        """Insert a batch; same result as inserting one by one, truncating once."""
        candidates = list(candidates)
        if not candidates:
            return
        pool = self.entries + candidates
        keep = nondominated_mask(np.array([e.objectives for e in pool], dtype=float))
        self.entries = [e for e, k in zip(pool, keep) if k]
        if reduce and len(self.entries) > self.capacity:
            cluster_reduce(self, self.capacity)

    def extreme_indices(self) -> tuple[int, int]:
        obj = self.objectives()
        return int(np.lexsort((obj[:, 1], obj[:, 0]))[0]), int(np.lexsort((obj[:, 0], obj[:, 1]))[0])


def average_linkage(points: np.ndarray, n_clusters: int) -> list[list[int]]:
    """Agglomerative average-linkage clustering down to ``n_clusters`` groups.

    Repeatedly merges the two clusters with the smallest mean pairwise
    Euclidean distance; ties go to the first pair in (i, j) scan order.
    Returns clusters as sorted index lists, ordered by their smallest index.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n_clusters < 1:
        raise ValueError("n_clusters must be >= 1")
    clusters: list[list[int] | None] = [[i] for i in range(n)]
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    alive = n
    while alive > n_clusters:
        flat = int(np.argmin(dist))
        i, j = divmod(flat, n)
        if i > j:
            i, j = j, i
        ni, nj = len(clusters[i]), len(clusters[j])
        merged = (ni * dist[i] + nj * dist[j]) / (ni + nj)
        dist[i, :] = merged
        dist[:, i] = merged
        dist[i, i] = np.inf
        dist[j, :] = np.inf
        dist[:, j] = np.inf
        clusters[i] = sorted(clusters[i] + clusters[j])
        clusters[j] = None
        alive -= 1
    return sorted((c for c in clusters if c is not None), key=lambda c: c[0])


def cluster_representatives(points: np.ndarray, clusters: Sequence[Sequence[int]],
                            protected: Sequence[int] = ()) -> list[int]:
    """One index per cluster: the member closest to the cluster centroid.

    A cluster holding a protected index is represented by it instead (the
    first protected index wins if it holds several).
    """
    pts = np.asarray(points, dtype=float)
    reps = []
    for c in clusters:
        held = [p for p in protected if p in c]
        if held:
            reps.append(held[0])
            continue
        sub = pts[list(c)]
        d = ((sub - sub.mean(axis=0)) ** 2).sum(axis=1)
        reps.append(c[int(np.argmin(d))])
    return reps


def cluster_reduce(archive: ParetoArchive, target_size: int) -> ParetoArchive:
    """Shrink ``archive`` in place to ``target_size`` entries by clustering.

    Distances are measured in min-max normalized objective space. The
    minimum-J1 and minimum-J2 entries always survive as the representatives
    of their clusters, so archive extremes never regress.
    """
    if len(archive) <= target_size:
        return archive
    obj = archive.objectives()
    norm = minmax_normalize(obj)
    clusters = average_linkage(norm, target_size)
    reps = cluster_representatives(norm, clusters, protected=archive.extreme_indices())
    archive.entries = [archive.entries[i] for i in sorted(reps)]
    return archive


def select_guides(local: ParetoArchive, global_: ParetoArchive) -> tuple[int, int]:
    """Indices (a, b) of the closest local/global pair in normalized objective space.

    Normalization spans both archives together; ties keep the first pair in
    row-major scan order.
    """
    if not len(local) or not len(global_):
        raise RuntimeError("guide selection needs two non-empty archives")
    lo = local.objectives()
    gl = global_.objectives()
    ref = np.vstack([lo, gl])
    a = minmax_normalize(lo, ref)
    b = minmax_normalize(gl, ref)
    d = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
    flat = int(np.argmin(d))
    return divmod(flat, len(gl))
