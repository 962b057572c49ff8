"""Replication harness: many seeded runs reduced to medians and percentile bands."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import contact_data
from .epidemic import DiseaseParams, run_to_completion, trajectory_array
from .interventions import InterventionPolicy
from .netgen import generate_dc, generate_er
from .seeding import derive_rng

SUMMARY_COLUMNS = ("peak_median", "peak_p5", "peak_p95", "peak_time",
                   "size_median", "size_p5", "size_p95")
BAND_COLUMNS = ("day", "i_median", "i_p5", "i_p95")

# column of the I count in a trajectory array
_I_COL = 3
_CUM_COL = 6


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    network_kind: str = "dc"
    degree_file: str | None = None     # None: bundled surrogate diary
    job_file: str | None = None        # optional job-contact extras to combine
    job_cap: int = 134
    p: float = 0.0
    closure_trigger: str = "source"
    er_n: int | None = None            # None: length of the degree sequence
    er_avg_degree: float | None = None  # None: mean of the degree sequence
    disease: DiseaseParams = field(default_factory=DiseaseParams)
    policy: InterventionPolicy = field(default_factory=InterventionPolicy)
    replications: int = 100
    regenerate_network: bool = True
    master_seed: int = 0
    max_days: int = 365

    def __post_init__(self):
        problems = []
        if self.network_kind not in ("dc", "er"):
            problems.append(f"network kind must be 'dc' or 'er', got {self.network_kind!r}")
        if not 0.0 <= self.p <= 1.0:
            problems.append("p must lie in [0, 1]")
        if self.replications < 1:
            problems.append("replications must be >= 1")
        if self.max_days < 1:
            problems.append("max_days must be >= 1")
        if self.master_seed < 0:
            problems.append("master_seed must be >= 0")
        if problems:
            raise ValueError("; ".join(problems))

    def degree_sequence(self) -> np.ndarray:
        diary = (contact_data.load_degree_file(self.degree_file) if self.degree_file
                 else contact_data.bundled_diary())
        if self.job_file is None:
            return diary
        extras = (contact_data.bundled_job_extras() if self.job_file == "bundled"
                  else contact_data.load_job_file(self.job_file))
        return contact_data.combine_with_job_contacts(diary, extras, self.job_cap)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class RunResult:
    trajectory: np.ndarray   # rows of TRAJECTORY_COLUMNS
    peak: int
    peak_day: int
    size: int


@dataclass(frozen=True)
class ReplicationSummary:
    days: np.ndarray
    i_median: np.ndarray
    i_p5: np.ndarray
    i_p95: np.ndarray
    peak: tuple[float, float, float]
    peak_time: float
    peak_day_range: tuple[int, int]
    size: tuple[float, float, float]
    runs: list[RunResult]

    def summary_row(self) -> list[float]:
        return [*self.peak, self.peak_time, *self.size]


def quantiles(x, qs=(0.5, 0.05, 0.95)) -> tuple[float, ...]:
    """Linear interpolation between order statistics (type 7)."""
    x = np.asarray(x, dtype=float)
    return tuple(float(v) for v in np.quantile(x, qs, method="linear"))


def build_network(cfg: ExperimentConfig, degrees, index: int):
    rng = derive_rng(cfg.master_seed, "network", index if cfg.regenerate_network else 0)
    if cfg.network_kind == "er":
        n = cfg.er_n if cfg.er_n is not None else len(degrees)
        k = cfg.er_avg_degree if cfg.er_avg_degree is not None else float(np.mean(degrees))
        return generate_er(n, k, rng)
    net, _ = generate_dc(degrees, cfg.p, rng, closure_trigger=cfg.closure_trigger)
    return net


def run_one(cfg: ExperimentConfig, degrees, index: int, net=None) -> RunResult:
    if net is None:
        net = build_network(cfg, degrees, index)
    policy = InterventionPolicy(cfg.policy.kind, cfg.policy.budget)
    records = run_to_completion(net, cfg.disease, policy, derive_rng(cfg.master_seed, "epidemic", index),
                                max_days=cfg.max_days)
    traj = trajectory_array(records)
    infected = traj[:, _I_COL]
    return RunResult(traj, int(infected.max()), int(np.argmax(infected)), int(traj[-1, _CUM_COL]))


def _run_chunk(args):
    cfg, degrees, indices = args
    shared = None if cfg.regenerate_network else build_network(cfg, degrees, 0)
    return [run_one(cfg, degrees, i, shared) for i in indices]


def _chunks(n, workers):
    size = max(1, -(-n // (workers * 4)))
    return [range(s, min(s + size, n)) for s in range(0, n, size)]


def summarize(runs: list[RunResult]) -> ReplicationSummary:
    length = max(len(r.trajectory) for r in runs)
    # finished runs are padded with their terminal I count, which is zero
    bands = np.zeros((len(runs), length))
    for k, r in enumerate(runs):
        series = r.trajectory[:, _I_COL]
        bands[k, :len(series)] = series
        bands[k, len(series):] = series[-1]
    q = np.quantile(bands, [0.5, 0.05, 0.95], axis=0, method="linear")
    peaks = [r.peak for r in runs]
    days = [r.peak_day for r in runs]
    return ReplicationSummary(
        days=np.arange(length),
        i_median=q[0], i_p5=q[1], i_p95=q[2],
        peak=quantiles(peaks),
        peak_time=quantiles(days, (0.5,))[0],
        peak_day_range=(min(days), max(days)),
        size=quantiles([r.size for r in runs]),
        runs=runs,
    )


def run_replications(cfg: ExperimentConfig, workers: int = 1) -> ReplicationSummary:
    """Run ``cfg.replications`` seeded trajectories and aggregate them.

    Replication ``i`` draws its network and epidemic from streams keyed by
    ``(master_seed, purpose, i)``, so results do not depend on ``workers``.
    """
    degrees = cfg.degree_sequence()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    chunks = _chunks(cfg.replications, workers)
    if workers == 1:
        parts = [_run_chunk((cfg, degrees, c)) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, [(cfg, degrees, c) for c in chunks]))
    return summarize([r for part in parts for r in part])


def sweep(grid, workers: int = 1) -> list[ReplicationSummary]:
    if not grid:
        raise ValueError("empty grid")
    out = []
    for k, cfg in enumerate(grid):
        try:
            out.append(run_replications(cfg, workers))
        except Exception as exc:
            raise ExperimentError(f"config {k}: {exc}") from exc
    return out


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return str(int(v)) if v.is_integer() else f"{v:.10g}"


def write_summary_csv(summaries, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            w.writerow([_fmt(v) for v in s.summary_row()])


def write_band_csv(summary: ReplicationSummary, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BAND_COLUMNS)
        for row in zip(summary.days, summary.i_median, summary.i_p5, summary.i_p95):
            w.writerow([_fmt(v) for v in row])


def read_band_csv(path) -> dict[str, np.ndarray]:
    data = np.loadtxt(Path(path), delimiter=",", skiprows=1, ndmin=2)
    return {c: data[:, k] for k, c in enumerate(BAND_COLUMNS)}
