"""Contact-survey degree data: loading, combination, summaries and tail fits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import optimize
from scipy.special import zeta

from .seeding import derive_rng

# Minutes assigned to each duration category (interval centroids).
DURATION_MINUTES = {1: 2.5, 2: 7.5, 3: 22.5, 4: 120.0, 5: 240.0}

ALPHA_BOUNDS = (1.0 + 1e-6, 50.0)


class DataError(ValueError):
    """Malformed or out-of-contract input data."""


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: float
    stdev: float
    n: int


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    xmin: int
    n_tail: int
    ks_statistic: float

    def to_dict(self, p_value=None) -> dict:
        return {"alpha": self.alpha, "xmin": self.xmin, "n_tail": self.n_tail,
                "ks": self.ks_statistic, "p_value": p_value}


@dataclass(frozen=True)
class ContactRecord:
    respondent_id: str
    duration_category: int


@dataclass(frozen=True)
class DurationProfile:
    respondent_id: str
    n_contacts: int
    total_minutes: float
    average_minutes: float


def _check_degrees(degrees) -> np.ndarray:
    seq = np.asarray(degrees, dtype=np.int64)
    if seq.ndim != 1 or len(seq) == 0:
        raise DataError("degree sequence is empty")
    return seq


def parse_degrees(lines, source="<input>") -> np.ndarray:
    """Parse one base-10 integer per line; ``#`` lines and blank lines are skipped."""
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = int(line, 10)
        except ValueError:
            raise DataError(f"{source}:{lineno}: not an integer: {line!r}") from None
        if value < 1:
            raise DataError(
                f"{source}:{lineno}: degree {value} < 1; respondents with no "
                "close-range contacts must be excluded before calibration")
        out.append(value)
    if not out:
        raise DataError(f"{source}: no degrees found")
    return np.array(out, dtype=np.int64)


def load_degree_file(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_degrees(fh, source=str(path))


def load_job_file(path) -> list[tuple[int, int]]:
    """Read ``<index> <extra>`` pairs (whitespace or comma separated)."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            try:
                idx, extra = (int(v) for v in parts)
            except ValueError:
                raise DataError(f"{path}:{lineno}: expected '<index> <extra>', got {line!r}") from None
            if extra < 0:
                raise DataError(f"{path}:{lineno}: negative extra count")
            pairs.append((idx, extra))
    return pairs


def bundled_diary() -> np.ndarray:
    """Synthetic diary sequence shipped with the package (n=2029)."""
    text = resources.files("hubsim.data").joinpath("diary_surrogate.txt").read_text()
    return parse_degrees(text.splitlines(), source="diary_surrogate.txt")


def bundled_job_extras() -> list[tuple[int, int]]:
    path = resources.files("hubsim.data").joinpath("job_surrogate.txt")
    with resources.as_file(path) as p:
        return load_job_file(p)


def combine_with_job_contacts(diary, job_extra, cap: int) -> np.ndarray:
    """Add job-related extra contacts to listed respondents, censoring at ``cap``."""
    seq = _check_degrees(diary).copy()
    if cap < 1 or cap < seq.max():
        raise DataError(f"cap {cap} is below the largest diary entry {seq.max()}")
    for idx, extra in job_extra:
        if not 0 <= idx < len(seq):
            raise DataError(f"job-contact index {idx} out of range 0..{len(seq) - 1}")
        seq[idx] = min(seq[idx] + extra, cap)
    return seq


def degree_stats(seq) -> SummaryStats:
    """Mean, median and population standard deviation."""
    x = _check_degrees(seq).astype(float)
    return SummaryStats(float(x.mean()), float(np.median(x)), float(x.std()), len(x))


# --- discrete power law -------------------------------------------------------

def power_law_loglik(alpha, tail, xmin) -> float:
    """Log-likelihood of ``tail`` (all >= xmin) under p(x) = x^-alpha / zeta(alpha, xmin)."""
    tail = np.asarray(tail, dtype=float)
    return float(-len(tail) * math.log(zeta(alpha, xmin)) - alpha * np.log(tail).sum())


def power_law_cdf(x, alpha, xmin):
    """P(X <= x) for integer ``x >= xmin``."""
    x = np.asarray(x, dtype=float)
    return 1.0 - zeta(alpha, x + 1) / zeta(alpha, xmin)


def _ks(tail, alpha, xmin) -> float:
    tail = np.sort(np.asarray(tail))
    support = np.arange(xmin, tail[-1] + 1)
    emp = np.searchsorted(tail, support, side="right") / len(tail)
    return float(np.max(np.abs(emp - power_law_cdf(support, alpha, xmin))))


def _fit_alpha(tail, xmin) -> float:
    n = len(tail)
    slog = float(np.log(np.asarray(tail, dtype=float)).sum())

    def nll(a):
        return n * math.log(zeta(a, xmin)) + a * slog

    res = optimize.minimize_scalar(nll, bounds=ALPHA_BOUNDS, method="bounded",
                                   options={"xatol": 1e-7})
    if not res.success:
        raise DataError(f"power-law fit did not converge: {res.message}")
    if res.x > ALPHA_BOUNDS[1] - 1e-3:
        raise DataError("power-law fit did not converge: alpha ran to the upper bound")
    return float(res.x)


def fit_power_law_tail(seq, xmin: int) -> PowerLawFit:
    """Discrete maximum-likelihood power-law fit to observations ``>= xmin``."""
    seq = _check_degrees(seq)
    if xmin < 1:
        raise DataError("xmin must be a positive integer")
    tail = seq[seq >= xmin]
    if len(tail) < 2:
        raise DataError(f"insufficient tail data: {len(tail)} observation(s) >= xmin={xmin}")
    if np.all(tail == xmin):
        raise DataError("power-law fit did not converge: all tail observations equal xmin")
    alpha = _fit_alpha(tail, xmin)
    return PowerLawFit(alpha, int(xmin), len(tail), _ks(tail, alpha, xmin))


def select_xmin(seq, min_tail: int = 10) -> PowerLawFit:
    """Pick xmin by minimising the KS distance over candidate values."""
    seq = _check_degrees(seq)
    best = None
    for xmin in np.unique(seq):
        if (seq >= xmin).sum() < min_tail:
            break
        try:
            fit = fit_power_law_tail(seq, int(xmin))
        except DataError:
            continue
        if best is None or fit.ks_statistic < best.ks_statistic:
            best = fit
    if best is None:
        raise DataError("no candidate xmin leaves enough tail data")
    return best


def sample_power_law(alpha, xmin, size, rng) -> np.ndarray:
    """Exact discrete power-law draws by inverting the survival function."""
    u = rng.random(size)
    norm = zeta(alpha, xmin)
    # bracket: continuous approximation, then widen until the survival drops below u
    lo = np.full(size, xmin, dtype=np.int64)
    hi = np.maximum(lo, np.floor((xmin - 0.5) * (1 - u) ** (-1 / (alpha - 1)) + 0.5).astype(np.int64)) * 2 + 1
    while True:
        short = zeta(alpha, hi + 1) / norm > 1 - u
        if not short.any():
            break
        hi[short] *= 2
    # smallest x with P(X <= x) >= u  <=>  zeta(alpha, x+1)/norm <= 1-u
    while np.any(hi > lo):
        mid = (lo + hi) // 2
        ok = zeta(alpha, mid + 1) / norm <= 1 - u
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid + 1)
    return lo


def power_law_gof(seq, fit: PowerLawFit, replicates: int = 1000, seed=0,
                  reselect_xmin: bool = False) -> float:
    """Semi-parametric bootstrap p-value of the KS statistic.

    Each synthetic data set keeps the size of ``seq``: with probability
    n_tail/n a point comes from the fitted power law, otherwise it is resampled
    from the observations below xmin. Replicate ``i`` uses its own RNG stream,
    so the result does not depend on evaluation order.
    """
    if replicates < 100:
        raise ValueError("replicates must be >= 100")
    seq = _check_degrees(seq)
    body = seq[seq < fit.xmin]
    n = len(seq)
    exceed = 0
    for i in range(replicates):
        rng = derive_rng(seed, "gof", i)
        n_tail = int(rng.binomial(n, fit.n_tail / n)) if len(body) else n
        synth = sample_power_law(fit.alpha, fit.xmin, n_tail, rng)
        if len(body):
            synth = np.concatenate([synth, rng.choice(body, n - n_tail)])
        try:
            refit = select_xmin(synth) if reselect_xmin else fit_power_law_tail(synth, fit.xmin)
        except DataError:
            continue
        if refit.ks_statistic > fit.ks_statistic:
            exceed += 1
    return exceed / replicates


# --- contact durations --------------------------------------------------------

def load_contact_records(path) -> list[ContactRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"respondent_id", "duration_category"}:
            raise DataError(f"{path}: header must be 'respondent_id,duration_category'")
        out = []
        for lineno, row in enumerate(reader, 2):
            try:
                cat = int(row["duration_category"])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad duration category") from None
            out.append(ContactRecord(row["respondent_id"], cat))
    return out


def duration_profiles(records) -> list[DurationProfile]:
    """Total and mean contact minutes per respondent, in order of first appearance."""
    totals: dict[str, list] = {}
    for rec in records:
        if rec.duration_category not in DURATION_MINUTES:
            raise DataError(f"unknown duration category {rec.duration_category!r} "
                            f"for respondent {rec.respondent_id}")
        acc = totals.setdefault(rec.respondent_id, [0, 0.0])
        acc[0] += 1
        acc[1] += DURATION_MINUTES[rec.duration_category]
    return [DurationProfile(rid, k, total, total / k) for rid, (k, total) in totals.items()]
