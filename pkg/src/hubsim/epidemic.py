"""Agent-based SEIR dynamics on a static contact network, one step per day."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, field

import numpy as np

from .network import Network

S, E, I, R = 0, 1, 2, 3

TRAJECTORY_COLUMNS = ("day", "S", "E", "I", "R", "new_infections",
                      "cumulative_infected", "interventions")


@dataclass(frozen=True)
class DiseaseParams:
    r_mean: float = 0.05
    r_sd: float = 0.02
    latency_days: int = 4
    infectious_window_days: int = 4
    recovery_time_mean_days: float = 14.0
    recovery_time_range_days: tuple[int, int] = (7, 42)
    recovery_prob_mean: float = 0.993
    recovery_prob_sd: float = 0.0015
    recovery_prob_range: tuple[float, float] = (0.990, 0.996)
    n_seeds: int = 5

    def __post_init__(self):
        lo, hi = self.recovery_time_range_days
        plo, phi = self.recovery_prob_range
        problems = []
        if not 0.0 <= self.r_mean <= 1.0:
            problems.append("r_mean must lie in [0, 1]")
        if self.r_sd < 0:
            problems.append("r_sd must be >= 0")
        if self.latency_days < 1 or self.infectious_window_days < 1 or lo < 1:
            problems.append("durations must be >= 1 day")
        if not lo <= self.recovery_time_mean_days <= hi:
            problems.append("recovery time range must contain its mean")
        if not 0.0 <= plo <= self.recovery_prob_mean <= phi <= 1.0:
            problems.append("recovery probability range must contain its mean, within [0, 1]")
        if plo == 0.0 and phi == 0.0:
            problems.append("recovery probability cannot be identically 0")
        if self.recovery_prob_sd < 0:
            problems.append("recovery_prob_sd must be >= 0")
        if self.n_seeds < 0:
            problems.append("n_seeds must be >= 0")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass(slots=True)
class DailyRecord:
    day: int
    S: int
    E: int
    I: int
    R: int
    new_infections: int
    cumulative_infected: int
    interventions: int


@dataclass
class EpidemicState:
    compartment: np.ndarray
    days_in_compartment: np.ndarray
    recovery_time: np.ndarray
    recovery_prob: np.ndarray
    edge_transmission_prob: np.ndarray
    ever_infected: np.ndarray
    ever_targeted: np.ndarray
    infected_by: np.ndarray
    day: int = 0
    hub_cursor: int = 0
    events: list | None = None
    cumulative: int = field(init=False)

    def __post_init__(self):
        self.cumulative = int(self.ever_infected.sum())

    @property
    def n(self) -> int:
        return len(self.compartment)

    def counts(self) -> tuple[int, int, int, int]:
        c = np.bincount(self.compartment, minlength=4)
        return int(c[S]), int(c[E]), int(c[I]), int(c[R])

    def record(self, new_infections=0, interventions=0) -> DailyRecord:
        return DailyRecord(self.day, *self.counts(), new_infections, self.cumulative, interventions)

    def move_to_recovered(self, agents) -> None:
        """Intervention: move agents to R (never counts as infection)."""
        self.compartment[agents] = R
        self.days_in_compartment[agents] = 0
        self.ever_targeted[agents] = True


def _truncated_normal(rng, mean, sd, lo, hi, size):
    if sd == 0:
        return np.full(size, min(max(mean, lo), hi), dtype=float)
    out = rng.normal(mean, sd, size)
    bad = (out < lo) | (out > hi)
    while bad.any():
        out[bad] = rng.normal(mean, sd, int(bad.sum()))
        bad = (out < lo) | (out > hi)
    return out


def _recovery_times(rng, params, size):
    lo, hi = params.recovery_time_range_days
    out = rng.poisson(params.recovery_time_mean_days, size)
    bad = (out < lo) | (out > hi)
    while bad.any():
        out[bad] = rng.poisson(params.recovery_time_mean_days, int(bad.sum()))
        bad = (out < lo) | (out > hi)
    return out


def _infect(state, agents, params, rng):
    """Place newly infected agents in E and draw their recovery parameters."""
    if len(agents) == 0:
        return
    state.compartment[agents] = E
    state.days_in_compartment[agents] = 0
    state.ever_infected[agents] = True
    state.recovery_time[agents] = _recovery_times(rng, params, len(agents))
    state.recovery_prob[agents] = _truncated_normal(
        rng, params.recovery_prob_mean, params.recovery_prob_sd,
        *params.recovery_prob_range, len(agents))
    state.cumulative += len(agents)


def init_epidemic(net: Network, params: DiseaseParams, rng, record_events=False) -> EpidemicState:
    """All agents susceptible except ``n_seeds`` distinct random agents placed in E."""
    if params.n_seeds > net.n:
        raise ValueError(f"n_seeds={params.n_seeds} exceeds network size {net.n}")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    n = net.n
    edge_prob = _truncated_normal(rng, params.r_mean, params.r_sd, 0.0, 1.0, net.n_edges)
    state = EpidemicState(
        compartment=np.zeros(n, dtype=np.int8),
        days_in_compartment=np.zeros(n, dtype=np.int32),
        recovery_time=np.zeros(n, dtype=np.int32),
        recovery_prob=np.zeros(n),
        edge_transmission_prob=edge_prob,
        ever_infected=np.zeros(n, dtype=bool),
        ever_targeted=np.zeros(n, dtype=bool),
        infected_by=np.full(n, -1, dtype=np.int64),
        events=[] if record_events else None,
    )
    seeds = np.sort(rng.choice(n, size=params.n_seeds, replace=False))
    _infect(state, seeds, params, rng)
    # seeding stands for an infection on day 0, whose end-of-day tick has passed
    state.days_in_compartment[seeds] = 1
    return state


def _transmission(state, net, params, rng):
    """Collect this day's successful challenges; returns (infectees, infectors)."""
    comp = state.compartment
    spreaders = np.flatnonzero((comp == I) & (state.days_in_compartment < params.infectious_window_days))
    if len(spreaders) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    starts = net.indptr[spreaders]
    lens = net.indptr[spreaders + 1] - starts
    total = int(lens.sum())
    offsets = np.repeat(starts - (np.cumsum(lens) - lens), lens)
    half = np.arange(total) + offsets
    owner = np.repeat(spreaders, lens)
    targets = net.indices[half]
    sus = comp[targets] == S
    half, owner, targets = half[sus], owner[sus], targets[sus]
    hit = rng.random(len(half)) < state.edge_transmission_prob[net.half_edge_ids[half]]
    targets, owner = targets[hit], owner[hit]
    # a target hit by several spreaders is credited to the first (lowest id)
    infectees, first = np.unique(targets, return_index=True)
    return infectees.astype(np.int64), owner[first].astype(np.int64)


def step_day(state: EpidemicState, net: Network, params: DiseaseParams, policy, rng) -> DailyRecord:
    """Advance one day: intervention, transmission, progression, counters.

    Counters tick at the end of the day. An infection made today counts today
    as its first day in E; an agent that progressed today restarts at 0 in its
    new compartment. Hence E lasts ``latency_days`` and an I agent transmits
    on exactly ``infectious_window_days`` days (counter values 0 .. window-1).
    """
    state.day += 1
    applied = policy.apply(state, net, rng) if policy is not None else 0

    infectees, infectors = _transmission(state, net, params, rng)

    comp = state.compartment
    dic = state.days_in_compartment
    to_i = (comp == E) & (dic >= params.latency_days)
    due = np.flatnonzero((comp == I) & (dic >= state.recovery_time))
    recovered = due[rng.random(len(due)) < state.recovery_prob[due]]
    if state.events is not None:
        day = state.day
        state.events.extend(("infection", day, int(a), int(b), int(dic[a]))
                            for a, b in zip(infectors, infectees))
        state.events.extend(("onset", day, int(a), int(dic[a])) for a in np.flatnonzero(to_i))
        state.events.extend(("recovery", day, int(a), int(dic[a])) for a in recovered)
    comp[to_i] = I
    comp[recovered] = R
    changed = to_i
    changed[recovered] = True
    dic[changed] = 0
    _infect(state, infectees, params, rng)
    dic[~changed] += 1
    state.infected_by[infectees] = infectors
    return state.record(len(infectees), applied)


def run_to_completion(net: Network, params: DiseaseParams, policy=None, rng_seed=0,
                      max_days: int = 365, record_events=False, return_state=False):
    """Simulate until no agent is in E or I, or ``max_days`` is reached.

    Returns the list of daily records starting with the day-0 initial state.
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    state = init_epidemic(net, params, rng, record_events=record_events)
    if policy is not None:
        policy.reset(state, net)
    records = [state.record()]
    while state.day < max_days:
        if records[-1].E == 0 and records[-1].I == 0:
            break
        records.append(step_day(state, net, params, policy, rng))
    return (records, state) if return_state else records


def trajectory_array(records) -> np.ndarray:
    return np.array([astuple(r) for r in records], dtype=np.int64).reshape(-1, len(TRAJECTORY_COLUMNS))


def write_trajectory(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        w.writerows(astuple(r) if isinstance(r, DailyRecord) else tuple(r) for r in records)


def compute_r0(net_or_degrees, params: DiseaseParams) -> float:
    """Basic reproductive number for a heterogeneous-degree network.

    R0 = tau * <k(k-1)> / <k>, with per-contact transmissibility aggregated
    linearly over the infectious window: tau = r_mean * infectious_window_days.
    """
    k = net_or_degrees.degrees if isinstance(net_or_degrees, Network) else np.asarray(net_or_degrees)
    k = k.astype(float)
    if len(k) == 0:
        raise ValueError("empty network")
    mean_k = k.mean()
    if mean_k == 0:
        return 0.0
    tau = params.r_mean * params.infectious_window_days
    return float(tau * (np.mean(k * k) - mean_k) / mean_k)


def secondary_cases_first_generation(state: EpidemicState) -> tuple[int, int]:
    """(number of generation-1 agents, infections they caused) from ``infected_by``."""
    seeds = np.flatnonzero(state.ever_infected & (state.infected_by < 0))
    gen1 = np.flatnonzero(np.isin(state.infected_by, seeds))
    caused = int(np.isin(state.infected_by, gen1).sum())
    return len(gen1), caused
