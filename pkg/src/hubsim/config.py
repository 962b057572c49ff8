"""Flat key-value run configuration (INI sections map to dotted keys).

Example::

    [network]
    kind = dc
    degree_file = bundled
    p = 0.0

    [disease]
    r_mean = 0.05
    r_sd = 0.02

    [intervention]
    kind = hub_target
    budget = 10

    [experiment]
    replications = 100
    max_days = 365
    regenerate_network = true

    [rng]
    master_seed = 1
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .epidemic import DiseaseParams
from .experiment import ExperimentConfig
from .interventions import KINDS, InterventionPolicy
from .netgen import CLOSURE_TRIGGERS


class ConfigError(ValueError):
    pass


REQUIRED = ("network.kind", "disease.r_mean", "disease.r_sd", "intervention.kind",
            "intervention.budget", "experiment.replications", "experiment.max_days",
            "experiment.regenerate_network", "rng.master_seed")
REQUIRED_DC = ("network.degree_file", "network.p")
REQUIRED_ER = ("network.n", "network.avg_degree")

OPTIONAL = ("network.job_file", "network.job_cap", "network.closure_trigger",
            "disease.n_seeds", "disease.latency_days", "disease.infectious_window_days",
            "disease.recovery_time_mean_days", "disease.recovery_prob_mean",
            "disease.recovery_prob_sd", "experiment.workers")

BUNDLED = "bundled"


def flatten(parser: configparser.ConfigParser) -> dict[str, str]:
    return {f"{sec}.{key}": val.strip() for sec in parser.sections() for key, val in parser[sec].items()}


def read_flat(path) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return flatten(parser)


class _Reader:
    def __init__(self, flat):
        self.flat = flat
        self.errors = []

    def get(self, key, conv, default=None):
        if key not in self.flat:
            return default
        raw = self.flat[key]
        try:
            return conv(raw)
        except (TypeError, ValueError):
            self.errors.append(f"{key}: invalid value {raw!r}")
            return default


def _bool(raw):
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _path(base: Path, raw: str) -> str | None:
    if raw == "" or raw.lower() == BUNDLED:
        return None
    p = Path(raw)
    return str(p if p.is_absolute() else base / p)


def build_config(flat: dict[str, str], base_dir=".") -> tuple[ExperimentConfig, int]:
    """Validate a flat key map and build the experiment config plus worker count.

    Every missing or invalid key is reported in a single :class:`ConfigError`.
    """
    base = Path(base_dir)
    rd = _Reader(flat)
    kind = flat.get("network.kind", "").lower()
    required = list(REQUIRED)
    if kind == "dc":
        required += REQUIRED_DC
    elif kind == "er":
        required += REQUIRED_ER
    elif "network.kind" in flat:
        rd.errors.append(f"network.kind: must be 'dc' or 'er', got {flat['network.kind']!r}")
    missing = [k for k in required if k not in flat]
    unknown = sorted(set(flat) - set(REQUIRED) - set(REQUIRED_DC) - set(REQUIRED_ER) - set(OPTIONAL))
    rd.errors += [f"{k}: missing" for k in missing]
    rd.errors += [f"{k}: unknown key" for k in unknown]

    p = rd.get("network.p", float, 0.0)
    if p is not None and not 0.0 <= p <= 1.0:
        rd.errors.append("network.p: must lie in [0, 1]")
    trigger = rd.get("network.closure_trigger", str.lower, "source")
    if trigger not in CLOSURE_TRIGGERS:
        rd.errors.append(f"network.closure_trigger: must be one of {CLOSURE_TRIGGERS}")
    job_file = flat.get("network.job_file")
    if job_file is not None and job_file.lower() == BUNDLED:
        job_path = BUNDLED
    else:
        job_path = _path(base, job_file) if job_file else None

    disease_kw = {}
    for key, conv in (("r_mean", float), ("r_sd", float), ("n_seeds", int), ("latency_days", int),
                      ("infectious_window_days", int), ("recovery_time_mean_days", float),
                      ("recovery_prob_mean", float), ("recovery_prob_sd", float)):
        val = rd.get(f"disease.{key}", conv)
        if val is not None:
            disease_kw[key] = val
    disease = None
    try:
        disease = DiseaseParams(**disease_kw)
    except ValueError as exc:
        rd.errors.append(f"disease: {exc}")

    pol_kind = flat.get("intervention.kind", "none").lower()
    if pol_kind not in KINDS:
        rd.errors.append(f"intervention.kind: must be one of {KINDS}")
    budget = rd.get("intervention.budget", int, 0)
    if budget is not None and budget < 0:
        rd.errors.append("intervention.budget: must be >= 0")

    reps = rd.get("experiment.replications", int, 1)
    max_days = rd.get("experiment.max_days", int, 365)
    regen = rd.get("experiment.regenerate_network", _bool, True)
    workers = rd.get("experiment.workers", int, 1)
    if workers is not None and workers < 1:
        rd.errors.append("experiment.workers: must be >= 1")
    seed = rd.get("rng.master_seed", int, 0)
    er_n = rd.get("network.n", int)
    er_k = rd.get("network.avg_degree", float)
    job_cap = rd.get("network.job_cap", int, 134)
    for key, val, low in (("experiment.replications", reps, 1), ("experiment.max_days", max_days, 1),
                          ("rng.master_seed", seed, 0)):
        if val is not None and val < low:
            rd.errors.append(f"{key}: must be >= {low}")

    cfg = None
    if not rd.errors:
        try:
            cfg = ExperimentConfig(
                network_kind=kind,
                degree_file=_path(base, flat.get("network.degree_file", "")),
                job_file=job_path, job_cap=job_cap, p=p, closure_trigger=trigger,
                er_n=er_n, er_avg_degree=er_k, disease=disease,
                policy=InterventionPolicy(pol_kind, budget),
                replications=reps, regenerate_network=regen,
                master_seed=seed, max_days=max_days)
        except ValueError as exc:
            rd.errors.append(str(exc))
    if rd.errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(rd.errors))
    return cfg, workers


def load_config(path) -> tuple[ExperimentConfig, int, dict[str, str]]:
    flat = read_flat(path)
    try:
        cfg, workers = build_config(flat, Path(path).parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return cfg, workers, flat
