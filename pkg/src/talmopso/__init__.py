"""Tracking area list planning with a multi-objective particle swarm."""

from .archive import ArchiveEntry, ParetoArchive, cluster_reduce, dominates, select_guides
from .cost import (
    AssignmentSolution,
    EncodingError,
    ObjectivePair,
    check_constraints,
    decode,
    evaluate,
    handover_cost,
    objective1,
    objective2,
    paging_cost,
    power_consumption,
    tau_cost,
)
from .fuzzy import best_compromise, fuzzy_membership
from .mopso import MopsoParams, MopsoResult, run
from .network import ConfigError, MobilityModel, NetworkConfig, build_mobility, build_topology, crossing_rate
from .oracle import hypervolume, true_pareto_front, weighted_sum_baseline

__version__ = "0.1.0"
