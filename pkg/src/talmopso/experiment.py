"""Seeded speed-sweep experiments: configuration, trials, statistics, export."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fuzzy import best_compromise
from .mopso import MopsoParams, MopsoResult, run
from .network import ConfigError, NetworkConfig, build_mobility, build_topology, representative_speed
from .oracle import BudgetExceeded, true_pareto_front

log = logging.getLogger(__name__)

DEFAULT_SPEED_RANGES = ((0.0, 8.0), (8.0, 16.0), (16.0, 25.0), (25.0, 33.0))
DEFAULT_SEEDS = (1, 2, 3, 4)
PAPER_SCALE = {"population": 10000, "iterations": 400}

TRIAL_HEADER = ["speed_lo", "speed_hi", "seed", "j1", "j2", "power_mw", "wall_ms"]
AGGREGATE_HEADER = [
    "speed_lo", "speed_hi", "trials",
    "j1_mean", "j1_std", "j1_rsd",
    "j2_mean", "j2_std", "j2_rsd",
    "power_mean", "power_std", "power_rsd",
]
FRONT_HEADER = ["j1", "j2", "is_compromise"]
OVERHEAD_DEFINITION = "mean over trials of the best-compromise J1 + J2"


class ExperimentError(RuntimeError):
    """A trial failed; completed trials have already been written out."""


@dataclass(frozen=True)
class ExperimentPlan:
    speed_ranges: tuple[tuple[float, float], ...] = DEFAULT_SPEED_RANGES
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    trials_per_range: int | None = None
    speed_mode: str = "midpoint"
    output_dir: str = "results"
    emit_plot_data: bool = False
    oracle: bool = False
    oracle_sigma_step: float = 0.1
    record_wall_time: bool = False

    def __post_init__(self):
        ranges = tuple(tuple(float(v) for v in r) for r in self.speed_ranges)
        object.__setattr__(self, "speed_ranges", ranges)
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.trials_per_range is None:
            object.__setattr__(self, "trials_per_range", len(self.seeds))
        self.validate()

    def validate(self) -> None:
        if self.trials_per_range != len(self.seeds):
            raise ConfigError(
                f"trials_per_range={self.trials_per_range} but {len(self.seeds)} seeds were given"
            )
        if not self.speed_ranges:
            raise ConfigError("speed_ranges must not be empty")
        prev_hi = -math.inf
        for r in self.speed_ranges:
            if len(r) != 2:
                raise ConfigError(f"speed range {r} must have two values")
            lo, hi = r
            if lo < 0 or lo > hi:
                raise ConfigError(f"speed range {r} must satisfy 0 <= lo <= hi")
            if lo < prev_hi:
                raise ConfigError("speed_ranges must be ordered and non-overlapping")
            prev_hi = hi
        if self.speed_mode not in ("midpoint", "uniform"):
            raise ConfigError(f"speed_mode must be 'midpoint' or 'uniform', got {self.speed_mode!r}")


def _build(cls, values: dict, section: str):
    names = {f.name for f in dataclasses.fields(cls) if f.init}
    unknown = sorted(set(values) - names)
    if unknown:
        raise ConfigError(f"{section}: unknown field(s) {', '.join(unknown)}")
    try:
        return cls(**values)
    except ConfigError as exc:
        raise ConfigError(f"{section}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from None


def parse_config(doc: dict | None, paper_scale: bool = False):
    """Validate a config document into (NetworkConfig, MopsoParams, ExperimentPlan).

    The document may hold ``network``, ``mopso`` and ``experiment`` sections;
    any field left out keeps its default.
    """
    doc = dict(doc or {})
    unknown = sorted(set(doc) - {"network", "mopso", "experiment"})
    if unknown:
        raise ConfigError(f"unknown section(s) {', '.join(unknown)}")
    for key in ("network", "mopso", "experiment"):
        if not isinstance(doc.get(key, {}), dict):
            raise ConfigError(f"section {key!r} must be a mapping")
    mopso = dict(doc.get("mopso", {}))
    if paper_scale:
        mopso.update(PAPER_SCALE)
    network = _build(NetworkConfig, doc.get("network", {}), "network")
    params = _build(MopsoParams, mopso, "mopso")
    plan = _build(ExperimentPlan, doc.get("experiment", {}), "experiment")
    return network, params, plan


def load_config(path=None, paper_scale: bool = False):
    """Read a JSON config file (or defaults when ``path`` is None)."""
    if path is None:
        return parse_config({}, paper_scale)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    return parse_config(doc, paper_scale)


@dataclass
class AggregateStats:
    n: int
    mean: float
    std: float

    @property
    def rsd(self) -> float:
        """Relative standard deviation in percent."""
        return 100.0 * self.std / self.mean if self.mean else 0.0


def aggregate_stats(values) -> AggregateStats:
    """Mean and sample (n-1) standard deviation."""
    x = np.asarray(values, dtype=float)
    std = float(x.std(ddof=1)) if len(x) > 1 else 0.0
    return AggregateStats(len(x), float(x.mean()), std)


@dataclass
class TrialSummary:
    speed_range: tuple[float, float]
    seed: int
    speed: float
    j1: float
    j2: float
    power_mw: float
    wall_ms: float
    front: list[tuple[float, float]] = field(default_factory=list)
    compromise: int = 0


@dataclass
class RangeAggregate:
    speed_range: tuple[float, float]
    j1: AggregateStats
    j2: AggregateStats
    power: AggregateStats

    @property
    def overhead(self) -> float:
        return self.j1.mean + self.j2.mean


@dataclass
class OracleFront:
    speed_range: tuple[float, float]
    speed: float
    front: list[tuple[float, float]]
    compromise: int
    hypervolume: float


@dataclass
class ExperimentResult:
    trials: list[TrialSummary]
    aggregates: list[RangeAggregate]
    oracle_fronts: list[OracleFront] = field(default_factory=list)


def summarize(trials: list[TrialSummary], ranges) -> list[RangeAggregate]:
    out = []
    for r in ranges:
        rows = [t for t in trials if t.speed_range == tuple(r)]
        if not rows:
            continue
        out.append(RangeAggregate(
            tuple(r),
            aggregate_stats([t.j1 for t in rows]),
            aggregate_stats([t.j2 for t in rows]),
            aggregate_stats([t.power_mw for t in rows]),
        ))
    return out


def run_trial(network: NetworkConfig, params: MopsoParams, speed_range, seed: int,
              speed_mode: str = "midpoint") -> TrialSummary:
    rng = np.random.default_rng(seed)
    speed = representative_speed(speed_range, speed_mode, rng)
    net = network.with_speed_range(*speed_range)
    mobility = build_mobility(net, speed, build_topology(net))
    result: MopsoResult = run(net, mobility, dataclasses.replace(params, seed=seed))
    best = result.compromise_entry
    return TrialSummary(
        speed_range=tuple(speed_range),
        seed=seed,
        speed=speed,
        j1=best.j1,
        j2=best.j2,
        power_mw=best.power,
        wall_ms=1000.0 * result.wall_time,
        front=[tuple(map(float, e.objectives)) for e in result.front],
        compromise=result.compromise,
    )


def run_oracle(network: NetworkConfig, plan: ExperimentPlan) -> list[OracleFront]:
    fronts = []
    for r in plan.speed_ranges:
        speed = representative_speed(r, "midpoint")
        net = network.with_speed_range(*r)
        mobility = build_mobility(net, speed)
        res = true_pareto_front(net, mobility, plan.oracle_sigma_step)
        pts = [p.as_tuple() for _, p in res.true_front]
        fronts.append(OracleFront(tuple(r), speed, pts, best_compromise(pts), res.hypervolume))
    return fronts


def run_experiment(network: NetworkConfig, params: MopsoParams, plan: ExperimentPlan,
                   out_dir=None) -> ExperimentResult:
    """Run every (speed range, seed) trial and aggregate per range.

    When ``out_dir`` is given and a trial fails, the finished trials are
    exported there before ``ExperimentError`` is raised.
    """
    oracle_fronts = []
    if plan.oracle:
        try:
            oracle_fronts = run_oracle(network, plan)
        except BudgetExceeded as exc:
            raise ConfigError(f"--oracle is limited to tiny instances: {exc}") from None

    trials: list[TrialSummary] = []
    for r in plan.speed_ranges:
        for seed in plan.seeds:
            try:
                trial = run_trial(network, params, r, seed, plan.speed_mode)
            except Exception as exc:
                partial = ExperimentResult(trials, summarize(trials, plan.speed_ranges), oracle_fronts)
                if out_dir is not None:
                    export(partial, out_dir, plan)
                raise ExperimentError(f"trial speed_range={r} seed={seed} failed: {exc}") from exc
            log.info("range %s seed %d: j1=%.6g j2=%.6g power=%.4g mW (%.0f ms)",
                     r, seed, trial.j1, trial.j2, trial.power_mw, trial.wall_ms)
            trials.append(trial)
    return ExperimentResult(trials, summarize(trials, plan.speed_ranges), oracle_fronts)


def _num(x: float) -> str:
    return repr(float(x))


def _range_tag(r) -> str:
    return f"{r[0]:g}-{r[1]:g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def front_csv(front, compromise: int) -> str:
    return _csv_text(FRONT_HEADER, [[_num(a), _num(b), int(i == compromise)] for i, (a, b) in enumerate(front)])


def trials_csv(trials: list[TrialSummary], record_wall_time: bool = False) -> str:
    rows = []
    for t in trials:
        wall = _num(t.wall_ms) if record_wall_time else ""
        rows.append([_num(t.speed_range[0]), _num(t.speed_range[1]), t.seed,
                     _num(t.j1), _num(t.j2), _num(t.power_mw), wall])
    return _csv_text(TRIAL_HEADER, rows)


def aggregate_csv(aggregates: list[RangeAggregate]) -> str:
    rows = []
    for a in aggregates:
        rows.append([_num(a.speed_range[0]), _num(a.speed_range[1]), a.j1.n,
                     _num(a.j1.mean), _num(a.j1.std), _num(a.j1.rsd),
                     _num(a.j2.mean), _num(a.j2.std), _num(a.j2.rsd),
                     _num(a.power.mean), _num(a.power.std), _num(a.power.rsd)])
    return _csv_text(AGGREGATE_HEADER, rows)


def _series(pairs) -> str:
    return "".join(f"{_num(x)} {_num(y)}\n" for x, y in pairs)


def export(result: ExperimentResult, out_dir, plan: ExperimentPlan | None = None) -> list[Path]:
    """Write trial, aggregate and front CSVs (plus plot series if requested)."""
    plan = plan or ExperimentPlan()
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "fronts").mkdir(exist_ok=True)
    except OSError as exc:
        raise ExperimentError(f"cannot create output directory {out}: {exc}") from None

    files: dict[Path, str] = {
        out / "trials.csv": trials_csv(result.trials, plan.record_wall_time),
        out / "aggregate.csv": aggregate_csv(result.aggregates),
    }
    for t in result.trials:
        name = f"front_{_range_tag(t.speed_range)}_seed{t.seed}.csv"
        files[out / "fronts" / name] = front_csv(t.front, t.compromise)
    for o in result.oracle_fronts:
        files[out / "fronts" / f"oracle_front_{_range_tag(o.speed_range)}.csv"] = front_csv(o.front, o.compromise)

    if plan.emit_plot_data:
        plots = out / "plots"
        files[plots / "overhead.dat"] = _series(
            (0.5 * sum(a.speed_range), a.overhead) for a in result.aggregates)
        files[plots / "power.dat"] = _series(
            (0.5 * sum(a.speed_range), a.power.mean) for a in result.aggregates)
        for t in result.trials:
            files[plots / f"front_{_range_tag(t.speed_range)}_seed{t.seed}.dat"] = _series(t.front)

    meta = {
        "overhead_definition": OVERHEAD_DEFINITION,
        "power_definition": "10 mW times the expected TAU events per second per UE, best-compromise plan",
        "std_convention": "sample (n-1)",
        "rsd_definition": "100 * std / mean",
        "wall_ms": {f"{_range_tag(t.speed_range)}/seed{t.seed}": t.wall_ms for t in result.trials},
    }
    files[out / "run_meta.json"] = json.dumps(meta, indent=2, sort_keys=True) + "\n"

    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
    except OSError as exc:
        raise ExperimentError(f"cannot write results to {out}: {exc}") from None
    return sorted(files)
