"""Exhaustive ground truth for tiny instances, and a weighted-sum baseline."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .archive import nondominated_mask
from .cost import AssignmentSolution, ObjectivePair, evaluate_batch
from .network import MobilityModel, NetworkConfig

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"enumeration needs {size} evaluations, budget is {budget}")
        self.size = size
        self.budget = budget


@dataclass
class OracleResult:
    true_front: list[tuple[AssignmentSolution, ObjectivePair]]
    hypervolume: float
    reference_point: tuple[float, float]
    sigma_step: float
    evaluated: int

    def objectives(self) -> np.ndarray:
        return np.array([p.as_tuple() for _, p in self.true_front], dtype=float)


def hypervolume(front, reference_point) -> float:
    """Exact 2-D hypervolume of ``front`` (minimization) below ``reference_point``."""
    pts = np.asarray([(p.j1, p.j2) if hasattr(p, "j1") else tuple(p) for p in front], dtype=float)
    ref = np.asarray(reference_point, dtype=float)
    if pts.size == 0:
        return 0.0
    pts = pts.reshape(-1, 2)
    if np.any(pts > ref):
        raise ValueError("every point must lie inside the reference box")
    pts = pts[nondominated_mask(pts)]
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    area = 0.0
    ceiling = ref[1]
    for j1, j2 in pts:
        area += (ref[0] - j1) * (ceiling - j2)
        ceiling = j2
    return float(area)


def simplex_grid(size: int, step: float) -> np.ndarray:
    """All points of the ``size``-simplex whose coordinates are multiples of ``step``."""
    parts = round(1.0 / step)
    if not math.isclose(parts * step, 1.0):
        raise ValueError(f"step {step} does not divide 1")
    rows = []
    # stars and bars over the interior cut positions
    for cuts in itertools.combinations(range(parts + size - 1), size - 1):
        edges = (-1,) + cuts + (parts + size - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(size)])
    return np.array(rows, dtype=float) / parts


def enumeration_size(config: NetworkConfig, sigma_step: float) -> int:
    parts = round(1.0 / sigma_step)
    n = config.list_size
    per_list = math.comb(config.num_cells, n) * math.comb(parts + n - 1, n - 1)
    return per_list ** config.num_lists


def _list_options(config: NetworkConfig, sigma_step: float):
    N, n = config.num_cells, config.list_size
    grid = simplex_grid(n, sigma_step)
    members, sigmas = [], []
    for cells in itertools.combinations(range(N), n):
        m = np.zeros(N, dtype=bool)
        m[list(cells)] = True
        for g in grid:
            s = np.zeros(N)
            s[list(cells)] = g
            members.append(m)
            sigmas.append(s)
    return np.array(members), np.array(sigmas)


def enumerate_space(config: NetworkConfig, mobility: MobilityModel, sigma_step: float = 0.1,
                    budget: int = DEFAULT_BUDGET, chunk: int = 20_000):
    """Evaluate every (membership, sigma-grid) plan. Returns (members, sigma, objectives)."""
    size = enumeration_size(config, sigma_step)
    if size > budget:
        raise BudgetExceeded(size, budget)
    opt_m, opt_s = _list_options(config, sigma_step)
    L = config.num_lists
    combos = np.array(list(itertools.product(range(len(opt_m)), repeat=L)), dtype=int).reshape(-1, L)
    objs = []
    for start in range(0, len(combos), chunk):
        idx = combos[start:start + chunk]
        j1, j2 = evaluate_batch(opt_m[idx], opt_s[idx], mobility, config)
        objs.append(np.column_stack([j1, j2]))
    return opt_m[combos], opt_s[combos], np.vstack(objs)


def true_pareto_front(config: NetworkConfig, mobility: MobilityModel, sigma_grid_step: float = 0.1,
                      budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Exact non-dominated set over all memberships and a simplex grid of sigma.

    The hypervolume reference point is 1.1 times the worst value of each
    objective over the whole enumeration.
    """
    members, sigma, obj = enumerate_space(config, mobility, sigma_grid_step, budget)
    keep = np.flatnonzero(nondominated_mask(obj))
    keep = keep[np.lexsort((obj[keep, 1], obj[keep, 0]))]
    front = [
        (AssignmentSolution(members[i], sigma[i], np.ones(config.num_lists)),
         ObjectivePair(float(obj[i, 0]), float(obj[i, 1])))
        for i in keep
    ]
    ref = (1.1 * float(obj[:, 0].max()), 1.1 * float(obj[:, 1].max()))
    return OracleResult(
        true_front=front,
        hypervolume=hypervolume(obj[keep], ref),
        reference_point=ref,
        sigma_step=sigma_grid_step,
        evaluated=len(obj),
    )


@dataclass
class BaselineResult:
    solution: AssignmentSolution
    objectives: ObjectivePair
    method: str
    notes: dict = field(default_factory=dict)


def _scalar(obj: np.ndarray, w: float, lo: np.ndarray, span: np.ndarray) -> np.ndarray:
    z = (obj - lo) / span
    return w * z[..., 0] + (1 - w) * z[..., 1]


def _best_vertex_sigma(members: np.ndarray, mobility, config) -> np.ndarray:
    """Sigma concentrated on the member with the smallest J1 coefficient, per list.

    J1 is linear in each list's sigma and J2 does not depend on sigma, so a
    simplex vertex is optimal for any weight once memberships are fixed. Unit
    sigma on member c of list l costs UE_c * (U*H*outflow(c, l) + Ga*Gc*|l|).
    """
    m = members.astype(float)
    prob = mobility.prob.copy()
    np.fill_diagonal(prob, 0.0)
    out = prob.sum(axis=1)[None, :] - m * (m @ prob.T)
    count = m.sum(axis=1, keepdims=True)
    coef = config.users()[None, :] * (config.tau_cost * config.relocation_cost * out
                                      + config.paging_rate * config.paging_cost * count)
    coef = np.where(members, coef, np.inf)
    sigma = np.zeros(members.shape)
    sigma[np.arange(len(members)), np.argmin(coef, axis=1)] = 1.0
    return sigma


def weighted_sum_baseline(config: NetworkConfig, mobility: MobilityModel, w: float,
                          sigma_grid_step: float = 0.1, budget: int = DEFAULT_BUDGET,
                          seed: int = 0, max_sweeps: int = 20) -> BaselineResult:
    """Minimize w * J1_hat + (1 - w) * J2_hat, objectives min-max normalized.

    Tiny instances are solved by enumeration; larger ones by a swap-move hill
    climb over memberships (first improvement, deterministic order) with the
    optimal sigma vertex per list.
    """
    if not 0 <= w <= 1:
        raise ValueError("w must lie in [0, 1]")
    try:
        members, sigma, obj = enumerate_space(config, mobility, sigma_grid_step, budget)
    except BudgetExceeded as exc:
        return _hill_climb(config, mobility, w, seed, max_sweeps, exc)
    lo = obj.min(axis=0)
    span = np.where(obj.max(axis=0) > lo, obj.max(axis=0) - lo, 1.0)
    score = _scalar(obj, w, lo, span)
    # exact ties on the scalarization go to the point that is best in the other objective
    order = np.lexsort((obj[:, 1], obj[:, 0], score)) if w >= 0.5 else np.lexsort((obj[:, 0], obj[:, 1], score))
    i = int(order[0])
    sol = AssignmentSolution(members[i], sigma[i], np.ones(config.num_lists))
    return BaselineResult(sol, ObjectivePair(float(obj[i, 0]), float(obj[i, 1])), "enumeration",
                          {"evaluated": len(obj), "sigma_step": sigma_grid_step})


def _hill_climb(config, mobility, w, seed, max_sweeps, exc) -> BaselineResult:
    rng = np.random.default_rng(seed)
    L, N, n = config.num_lists, config.num_cells, config.list_size

    def plan_of(members):
        sigma = _best_vertex_sigma(members, mobility, config)
        j1, j2 = evaluate_batch(members[None], sigma[None], mobility, config)
        return sigma, np.array([j1[0], j2[0]])

    # normalization from a seeded sample of random memberships
    sample = []
    for _ in range(32):
        m = np.zeros((L, N), dtype=bool)
        for l in range(L):
            m[l, rng.choice(N, n, replace=False)] = True
        sample.append(plan_of(m)[1])
    sample = np.array(sample)
    lo = sample.min(axis=0)
    span = np.where(sample.max(axis=0) > lo, sample.max(axis=0) - lo, 1.0)

    members = np.zeros((L, N), dtype=bool)
    members[:, :n] = True
    sigma, obj = plan_of(members)
    best = _scalar(obj, w, lo, span)
    sweeps = 0
    improved = True
    while improved and sweeps < max_sweeps:
        improved = False
        sweeps += 1
        for l in range(L):
            for out_cell in np.flatnonzero(members[l]):
                for in_cell in np.flatnonzero(~members[l]):
                    trial = members.copy()
                    trial[l, out_cell] = False
                    trial[l, in_cell] = True
                    t_sigma, t_obj = plan_of(trial)
                    score = _scalar(t_obj, w, lo, span)
                    if score < best - 1e-12:
                        members, sigma, obj, best = trial, t_sigma, t_obj, score
                        improved = True
                        break
                if improved:
                    break
    sol = AssignmentSolution(members, sigma, np.ones(L))
    return BaselineResult(sol, ObjectivePair(float(obj[0]), float(obj[1])), "hill_climb",
                          {"fallback_reason": str(exc), "sweeps": sweeps})
