"""Decoding of swarm positions into TAL plans, and the two objectives.

A position has ``2*L*N`` entries in [0, 1]. The first ``L*N`` entries
(list-major) are relaxed membership scores: the ``list_size`` largest scores
of each list become its member cells. The second block holds raw usage
fractions, which are masked to the members and normalized to sum to one per
list.

Cell indices are 0-based throughout the code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import MobilityModel, NetworkConfig

USAGE_TOL = 1e-9


class EncodingError(ValueError):
    """Raised when a position vector does not match the network layout."""


@dataclass(frozen=True)
class ObjectivePair:
    j1: float
    j2: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.j1, self.j2)


@dataclass(frozen=True)
class AssignmentSolution:
    """A decoded TAL plan.

    Attributes:
        members: (L, N) boolean membership, one row per list.
        sigma: (L, N) usage fractions, zero outside each list.
        mme_flags: (L,) list-to-MME flags; all ones in the centralized scheme.
    """

    members: np.ndarray
    sigma: np.ndarray
    mme_flags: np.ndarray

    @classmethod
    def from_lists(cls, lists, sigma, num_cells: int) -> "AssignmentSolution":
        """Build from member index lists and a matching (L, N) sigma array."""
        members = np.zeros((len(lists), num_cells), dtype=bool)
        for l, cells in enumerate(lists):
            members[l, list(cells)] = True
        sigma = np.asarray(sigma, dtype=float).reshape(len(lists), num_cells)
        return cls(members=members, sigma=sigma, mme_flags=np.ones(len(lists)))

    @property
    def num_lists(self) -> int:
        return self.members.shape[0]

    def expanded(self) -> np.ndarray:
        """The (L, N, N) cell-to-list matrices C[l, k, n] = m[l, k] and m[l, n]."""
        m = self.members
        return m[:, :, None] & m[:, None, :]

    def member_lists(self) -> list[list[int]]:
        return [np.flatnonzero(row).tolist() for row in self.members]


def _split(position: np.ndarray, config: NetworkConfig) -> tuple[np.ndarray, np.ndarray]:
    position = np.asarray(position, dtype=float)
    L, N = config.num_lists, config.num_cells
    if position.shape[-1] != 2 * L * N:
        raise EncodingError(f"position has length {position.shape[-1]}, expected 2*L*N = {2 * L * N}")
    lead = position.shape[:-1]
    scores = position[..., : L * N].reshape(*lead, L, N)
    raw = position[..., L * N :].reshape(*lead, L, N)
    return scores, raw


def top_members(scores: np.ndarray, list_size: int) -> np.ndarray:
    """Boolean mask of the ``list_size`` largest scores along the last axis.

    Ties go to the lower cell index (stable sort on negated scores).
    """
    order = np.argsort(-scores, axis=-1, kind="stable")[..., :list_size]
    mask = np.zeros(scores.shape, dtype=bool)
    np.put_along_axis(mask, order, True, axis=-1)
    return mask


def normalize_usage(raw: np.ndarray, members: np.ndarray) -> np.ndarray:
    """Mask raw usage to members and rescale each list to sum to one.

    Lists whose masked entries are all zero fall back to a uniform split.
    """
    masked = np.where(members, np.clip(raw, 0.0, None), 0.0)
    total = masked.sum(axis=-1, keepdims=True)
    count = members.sum(axis=-1, keepdims=True)
    uniform = members / np.maximum(count, 1)
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, masked / safe, uniform)


def decode(position, config: NetworkConfig) -> AssignmentSolution:
    scores, raw = _split(position, config)
    if scores.ndim != 2:
        raise EncodingError("decode takes a single position; use decode_batch for populations")
    members = top_members(scores, config.list_size)
    sigma = normalize_usage(raw, members)
    return AssignmentSolution(members=members, sigma=sigma, mme_flags=np.ones(config.num_lists))


def decode_batch(positions, config: NetworkConfig) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decode of a (pop, P) array into (pop, L, N) members and sigma."""
    scores, raw = _split(positions, config)
    members = top_members(scores, config.list_size)
    return members, normalize_usage(raw, members)


def encode(sol: AssignmentSolution) -> np.ndarray:
    """A position that decodes back to ``sol``."""
    scores = sol.members.astype(float)
    return np.concatenate([scores.ravel(), np.asarray(sol.sigma, dtype=float).ravel()])


@dataclass
class ConstraintCheck:
    name: str
    passed: bool
    violation: float


@dataclass
class ViolationReport:
    checks: list[ConstraintCheck]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[ConstraintCheck]:
        return [c for c in self.checks if not c.passed]


def check_constraints(sol: AssignmentSolution, config: NetworkConfig, tol: float = USAGE_TOL) -> ViolationReport:
    """Evaluate every feasibility rule of a TAL plan; never raises."""
    C = sol.expanded()
    members = sol.members
    sigma = np.asarray(sol.sigma, dtype=float)
    checks = []

    size_err = int(np.abs(members.sum(axis=1) - config.list_size).max())
    checks.append(ConstraintCheck("list_size", size_err == 0, float(size_err)))

    Ci = C.astype(int)
    offdiag = Ci.sum(axis=(1, 2)) - np.einsum("lkk->l", Ci)
    excess = max(0, int(offdiag.max()) - config.max_offdiag)
    checks.append(ConstraintCheck("max_size", excess == 0, float(excess)))

    asym = np.abs(Ci - Ci.transpose(0, 2, 1)).max()
    checks.append(ConstraintCheck("symmetry", bool(asym == 0), float(asym)))

    # sum_k sigma[l,k] * C[l,k,n] must be 1 for every member column n
    col = np.einsum("lk,lkn->ln", sigma, C)
    usage_err = np.abs(np.where(members, col - 1.0, 0.0)).max() if members.any() else 0.0
    checks.append(ConstraintCheck("usage", bool(usage_err <= tol), float(usage_err)))

    leak = np.abs(np.where(members, 0.0, sigma)).max()
    checks.append(ConstraintCheck("usage_mask", bool(leak <= tol), float(leak)))

    below = max(0.0, -sigma.min())
    above = max(0.0, sigma.max() - 1.0)
    flags = np.asarray(sol.mme_flags, dtype=float)
    flag_err = np.abs(flags - np.round(np.clip(flags, 0, 1))).max()
    bound_err = max(below, above, flag_err)
    checks.append(ConstraintCheck("bounds", bool(bound_err <= tol), float(bound_err)))
    return ViolationReport(checks)


# Per-cell reference evaluations. These follow the cost equations term by
# term and are used as the oracle for the vectorized path below.

def tau_cost(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig, k: int) -> float:
    C = sol.expanded()
    ue = config.users()
    prob = mobility.prob
    total = 0.0
    for n in range(config.num_cells):
        if n == k:
            continue
        inner = 0.0
        for l in range(sol.num_lists):
            inner += config.relocation_cost * sol.mme_flags[l] * sol.sigma[l, k] * (1 - C[l, k, n])
        total += prob[k, n] * inner
    return float(ue[k] * config.tau_cost * total)


def paging_cost(sol: AssignmentSolution, config: NetworkConfig, k: int) -> float:
    C = sol.expanded()
    ue = config.users()
    own = 0.0
    shared = 0.0
    for l in range(sol.num_lists):
        own += ue[k] * sol.sigma[l, k]
        for n in range(config.num_cells):
            if n != k:
                shared += ue[n] * C[l, k, n] * sol.sigma[l, n]
    return float(config.paging_rate * config.paging_cost * (own + shared))


def handover_cost(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig, k: int) -> float:
    C = sol.expanded()
    ue = config.users()
    total = 0.0
    for l in range(sol.num_lists):
        for n in range(config.num_cells):
            if n != k:
                total += ue[k] * mobility.prob[k, n] * (1 - C[l, k, n])
    return float(total)


def objective1(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig) -> float:
    return sum(tau_cost(sol, mobility, config, k) + paging_cost(sol, config, k) for k in range(config.num_cells))


def objective2(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig) -> float:
    return sum(handover_cost(sol, mobility, config, k) for k in range(config.num_cells))


def evaluate(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig) -> ObjectivePair:
    j1, j2 = evaluate_batch(sol.members[None], np.asarray(sol.sigma, float)[None], mobility, config,
                            np.asarray(sol.mme_flags, float)[None])
    return ObjectivePair(float(j1[0]), float(j2[0]))


TAU_POWER_MW = 10.0


def power_consumption(sol: AssignmentSolution, mobility: MobilityModel, config: NetworkConfig) -> float:
    """Network-average per-UE TAU power draw in mW (10 mW per TAU event rate)."""
    _, _, tau_events = _terms(sol.members[None], np.asarray(sol.sigma, float)[None], mobility, config,
                              np.asarray(sol.mme_flags, float)[None])
    return float(power_from_events(tau_events, config)[0])


def power_from_events(tau_events: np.ndarray, config: NetworkConfig) -> np.ndarray:
    total_ue = config.users().sum()
    if total_ue == 0:
        return np.zeros_like(tau_events)
    return TAU_POWER_MW * tau_events / total_ue


def _terms(members, sigma, mobility, config, flags=None):
    """Vectorized (tau+paging, handover, tau event rate) totals per candidate.

    Uses C[l,k,n] = m[l,k] m[l,n] to collapse the neighbor sums into matrix
    products with Prob, so each candidate costs O(L*N*N).
    """
    members = np.asarray(members, dtype=bool)
    sigma = np.asarray(sigma, dtype=float)
    m = members.astype(float)
    if flags is None:
        flags = np.ones(members.shape[:2])
    ue = config.users()
    prob = mobility.prob.copy()
    np.fill_diagonal(prob, 0.0)
    rows = prob.sum(axis=1)

    # in_list[b,l,k] = sum_{n != k} Prob[k,n] * C[l,k,n]
    in_list = m * np.einsum("kn,bln->blk", prob, m)
    out_list = rows[None, None, :] - in_list

    weighted = flags[:, :, None] * sigma
    tau_events = np.einsum("k,blk,blk->b", ue, weighted, out_list)
    tau = config.tau_cost * config.relocation_cost * tau_events

    load = sigma * ue[None, None, :]
    member_load = load * m
    shared = m * (member_load.sum(axis=2, keepdims=True) - member_load)
    paging = config.paging_rate * config.paging_cost * (load.sum(axis=(1, 2)) + shared.sum(axis=(1, 2)))

    handover = np.einsum("k,blk->b", ue, out_list)
    return tau + paging, handover, tau_events


def evaluate_batch(members, sigma, mobility: MobilityModel, config: NetworkConfig, flags=None):
    """Objectives for a stack of decoded candidates; returns (j1, j2) arrays."""
    j1, j2, _ = _terms(members, sigma, mobility, config, flags)
    return j1, j2


def evaluate_positions(positions, mobility: MobilityModel, config: NetworkConfig):
    """Decode and evaluate a (pop, P) array. Returns (objectives (pop, 2), power (pop,))."""
    members, sigma = decode_batch(positions, config)
    j1, j2, events = _terms(members, sigma, mobility, config)
    return np.column_stack([j1, j2]), power_from_events(events, config)
