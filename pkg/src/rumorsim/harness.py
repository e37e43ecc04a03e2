"""Reproducible experiment runner and statistics.

Everything an experiment produces is a pure function of its config, master
seed included: trial i draws from the RNG address (seed, i) no matter when
or in what order it runs, and output files are written with fixed formats so
re-runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import bounds, phases
from .engine import FailureModel, Protocol, run
from .phases import Phase, load_schedule, run_delayed
from .rng import TrialRandomness, derive_key
from .topology import (
    ListAssignment,
    ListStrategy,
    Topology,
    complete_graph,
    load_lists_file,
    realize_lists,
    star_graph,
)

PROTOCOLS = ("random", "quasi", "feedback", "delayed")
TOPOLOGIES = ("complete", "star")
LIST_CHOICES = ("canonical", "reversed", "random", "file")
_BOOTSTRAP_RESAMPLES = 10_000


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass
class ExperimentConfig:
    protocol: str = "quasi"
    topology: str = "complete"
    n: int = 2
    p: float = 1.0
    trials: int = 1
    seed: int = 0
    lists: str = "canonical"
    list_seed: int = 0
    lists_path: str | None = None
    start: str | None = None  # fixed:<v> | sweep | symmetric; None = default
    max_rounds: int | None = None
    schedule_path: str | None = None
    out_path: str | None = None
    summary_path: str | None = None

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol: expected one of {PROTOCOLS}, got {self.protocol!r}")
        if self.topology not in TOPOLOGIES:
            raise ConfigError(f"topology: expected one of {TOPOLOGIES}, got {self.topology!r}")
        if self.n < 1:
            raise ConfigError(f"n: must be >= 1, got {self.n}")
        if self.topology == "star" and self.n < 3:
            raise ConfigError(f"n: star topology needs n >= 3, got {self.n}")
        if not 0.0 < self.p <= 1.0:
            raise ConfigError(f"p: must lie in (0, 1], got {self.p}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.lists not in LIST_CHOICES:
            raise ConfigError(f"lists: expected one of {LIST_CHOICES}, got {self.lists!r}")
        if self.lists == "file" and not self.lists_path:
            raise ConfigError("lists_path: required when lists=file")
        if self.max_rounds is not None and self.max_rounds < 0:
            raise ConfigError(f"max_rounds: must be >= 0, got {self.max_rounds}")
        if (self.schedule_path is not None) != (self.protocol == "delayed"):
            raise ConfigError("schedule_path: present exactly when protocol=delayed")
        self.start_vertex_for(0)  # validates the start policy string

    def build_topology(self) -> Topology:
        return complete_graph(self.n) if self.topology == "complete" else star_graph(self.n)

    def build_lists(self) -> ListAssignment:
        topo = self.build_topology()
        if self.lists == "file":
            return load_lists_file(topo, self.lists_path)
        strategy = {
            "canonical": ListStrategy.CANONICAL,
            "reversed": ListStrategy.REVERSED,
            "random": ListStrategy.RANDOM,
        }[self.lists]
        return realize_lists(topo, strategy, self.list_seed)

    def start_vertex_for(self, trial: int) -> int:
        policy = self.start
        if policy is None:
            policy = "symmetric" if self.topology == "complete" else "sweep"
        if policy == "symmetric":
            return 0
        if policy == "sweep":
            return trial % self.n
        if policy.startswith("fixed:"):
            try:
                v = int(policy.split(":", 1)[1])
            except ValueError:
                raise ConfigError(f"start: bad fixed vertex in {policy!r}") from None
            if not 0 <= v < self.n:
                raise ConfigError(f"start: vertex {v} out of range for n={self.n}")
            return v
        raise ConfigError(f"start: expected fixed:<v>, sweep or symmetric, got {policy!r}")

    def resolved_max_rounds(self) -> int:
        if self.max_rounds is not None:
            return self.max_rounds
        return bounds.default_max_rounds(self.n, self.p)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    start_vertex: int
    rounds: int
    completed: bool


@dataclass(frozen=True)
class SummaryStats:
    trials: int
    completion_rate: float
    t_min: float
    t_mean: float
    t_median: float
    t_p95: float
    t_max: float
    cdf_t: list[int]
    cdf_prob: list[float]

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "completion_rate": self.completion_rate,
            "min": self.t_min,
            "mean": self.t_mean,
            "median": self.t_median,
            "p95": self.t_p95,
            "max": self.t_max,
            "cdf": {"t": self.cdf_t, "prob": self.cdf_prob},
        }


def summarize(records: list[TrialRecord]) -> SummaryStats:
    trials = len(records)
    done = np.array([r.rounds for r in records if r.completed], dtype=np.int64)
    rate = len(done) / trials
    if len(done) == 0:
        nan = float("nan")
        return SummaryStats(trials, 0.0, nan, nan, nan, nan, nan, [], [])
    support, counts = np.unique(done, return_counts=True)
    return SummaryStats(
        trials=trials,
        completion_rate=rate,
        t_min=float(done.min()),
        t_mean=float(done.mean()),
        t_median=float(np.median(done)),
        t_p95=float(np.percentile(done, 95)),
        t_max=float(done.max()),
        cdf_t=[int(t) for t in support],
        cdf_prob=[float(c) for c in np.cumsum(counts) / trials],
    )


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summary: SummaryStats
    phase_records: list[list[phases.PhaseRecord]] = field(default_factory=list)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run config.trials independent trials and optionally persist outputs."""
    config.validate()
    lists = config.build_lists()
    failure = FailureModel(config.p)
    max_rounds = config.resolved_max_rounds()
    schedule: list[Phase] | None = None
    if config.protocol == "delayed":
        schedule = load_schedule(config.schedule_path)
    protocol = {
        "random": Protocol.FULLY_RANDOM,
        "quasi": Protocol.QUASIRANDOM,
        "feedback": Protocol.FEEDBACK_RETRY,
    }.get(config.protocol)

    records = []
    phase_records = []
    for trial in range(config.trials):
        rng = TrialRandomness(config.seed, trial)
        start = config.start_vertex_for(trial)
        if schedule is not None:
            res = run_delayed(lists, failure, start, schedule, rng, max_rounds)
            phase_records.append(res.phases)
        else:
            res = run(lists, protocol, failure, start, rng, max_rounds)
        records.append(TrialRecord(trial, start, res.rounds, res.completed))

    result = ExperimentResult(config, records, summarize(records), phase_records)
    if config.out_path:
        write_records_csv(records, config.out_path)
    if config.summary_path:
        write_json(result.summary.to_dict(), config.summary_path)
    return result


def write_records_csv(records: list[TrialRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("trial,start_vertex,rounds,completed\n")
        for r in records:
            fh.write(f"{r.trial},{r.start_vertex},{r.rounds},{str(r.completed).lower()}\n")


def write_json(payload: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class CompareResult:
    a: ExperimentResult
    b: ExperimentResult
    median_ratio: float
    mean_ratio: float
    median_ci: tuple[float, float]
    mean_ci: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "a": self.a.summary.to_dict(),
            "b": self.b.summary.to_dict(),
            "ratio": {
                "median": self.median_ratio,
                "mean": self.mean_ratio,
                "median_ci95": list(self.median_ci),
                "mean_ci95": list(self.mean_ci),
                "resamples": _BOOTSTRAP_RESAMPLES,
            },
        }


def compare(config_a: ExperimentConfig, config_b: ExperimentConfig) -> CompareResult:
    """Run both configs and report b/a broadcast-time ratios with 95% CIs.

    Intervals come from a seeded bootstrap over completed trials, resampling
    each arm independently.
    """
    res_a = run_experiment(replace(config_a, out_path=None, summary_path=None))
    res_b = run_experiment(replace(config_b, out_path=None, summary_path=None))
    t_a = np.array([r.rounds for r in res_a.records if r.completed], dtype=np.float64)
    t_b = np.array([r.rounds for r in res_b.records if r.completed], dtype=np.float64)
    if len(t_a) == 0 or len(t_b) == 0:
        raise ConfigError("trials: comparison needs completed trials in both arms")

    median_ratio = float(np.median(t_b) / np.median(t_a))
    mean_ratio = float(t_b.mean() / t_a.mean())

    gen = np.random.default_rng(derive_key(config_a.seed, config_b.seed, 0xB0075))
    idx_a = gen.integers(0, len(t_a), size=(_BOOTSTRAP_RESAMPLES, len(t_a)))
    idx_b = gen.integers(0, len(t_b), size=(_BOOTSTRAP_RESAMPLES, len(t_b)))
    med = np.median(t_b[idx_b], axis=1) / np.median(t_a[idx_a], axis=1)
    mean = t_b[idx_b].mean(axis=1) / t_a[idx_a].mean(axis=1)
    median_ci = (float(np.percentile(med, 2.5)), float(np.percentile(med, 97.5)))
    mean_ci = (float(np.percentile(mean, 2.5)), float(np.percentile(mean, 97.5)))

    out = CompareResult(res_a, res_b, median_ratio, mean_ratio, median_ci, mean_ci)
    if config_a.summary_path:
        write_json(out.to_dict(), config_a.summary_path)
    return out


@dataclass
class CheckReport:
    n: int
    p: float
    eps: float
    trials: int
    lower: float
    upper: float
    frac_below_lower: float
    frac_above_upper: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "eps": self.eps,
            "trials": self.trials,
            "lower": self.lower,
            "upper": self.upper,
            "frac_below_lower": self.frac_below_lower,
            "frac_above_upper": self.frac_above_upper,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def check_bounds(config: ExperimentConfig, eps: float, threshold: float = 0.05) -> CheckReport:
    """Fractions of trials violating the (1 +/- eps) bounds.

    Trials that never completed count as violating the upper bound.
    """
    result = run_experiment(config)
    lo = bounds.lower_bound(config.n, config.p, eps)
    hi = bounds.upper_bound(config.n, config.p, eps)
    below = sum(1 for r in result.records if r.completed and r.rounds < lo)
    above = sum(1 for r in result.records if not r.completed or r.rounds > hi)
    frac_below = below / config.trials
    frac_above = above / config.trials
    report = CheckReport(
        n=config.n,
        p=config.p,
        eps=eps,
        trials=config.trials,
        lower=lo,
        upper=hi,
        frac_below_lower=frac_below,
        frac_above_upper=frac_above,
        threshold=threshold,
        passed=frac_below <= threshold and frac_above <= threshold,
    )
    if config.summary_path:
        write_json(report.to_dict(), config.summary_path)
    return report
