"""Daily intervention policies that move targeted agents straight to R."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .epidemic import EpidemicState, R, S, E, I
from .network import Network

KINDS = ("none", "no_target", "contact_target", "hub_target")


def hub_order(net: Network) -> np.ndarray:
    """Agents by descending degree, ties broken by ascending id."""
    return np.lexsort((np.arange(net.n), -net.degrees))


def _eligible_for_move(state, agents):
    comp = state.compartment[agents]
    return agents[comp != R]


def apply_no_target(state: EpidemicState, budget: int, rng) -> int:
    """Move up to ``budget`` random non-R agents (never targeted before) to R."""
    pool = np.flatnonzero((state.compartment != R) & ~state.ever_targeted)
    if budget <= 0 or len(pool) == 0:
        return 0
    chosen = rng.choice(pool, size=min(budget, len(pool)), replace=False)
    state.move_to_recovered(chosen)
    return len(chosen)


def apply_contact_target(state: EpidemicState, net: Network, budget: int, rng) -> int:
    """Random egos each nominate one random, not yet targeted neighbour.

    Nominees already in R are flagged as targeted without a state change and
    still use up budget. Egos are drawn with replacement from all agents; an
    ego without an eligible neighbour is skipped.
    """
    if budget <= 0:
        return 0
    deg = net.degrees
    # nominees must have at least one neighbour to be reachable
    reachable = int(((deg >= 1) & ~state.ever_targeted).sum())
    goal = min(budget, reachable)
    nominated: set[int] = set()
    moved = 0
    attempts = 0
    max_attempts = 50 * max(goal, 1) + 10 * net.n
    while len(nominated) < goal and attempts < max_attempts:
        attempts += 1
        ego = int(rng.integers(net.n))
        nb = net.neighbors(ego)
        if len(nb) == 0:
            continue
        ok = nb[~state.ever_targeted[nb]]
        if len(nominated):
            ok = ok[~np.isin(ok, list(nominated))]
        if len(ok) == 0:
            continue
        v = int(ok[int(rng.integers(len(ok)))])
        nominated.add(v)
        if state.compartment[v] == R:
            state.ever_targeted[v] = True
        else:
            state.move_to_recovered([v])
            moved += 1
    return moved


def apply_hub_target(state: EpidemicState, budget: int, order: np.ndarray) -> int:
    """Take the next ``budget`` not yet targeted agents in ``order``."""
    if budget <= 0:
        return 0
    picked = []
    cur = state.hub_cursor
    while cur < len(order) and len(picked) < budget:
        v = int(order[cur])
        cur += 1
        if not state.ever_targeted[v]:
            picked.append(v)
    state.hub_cursor = cur
    if not picked:
        return 0
    picked = np.array(picked)
    state.ever_targeted[picked] = True
    movable = _eligible_for_move(state, picked)
    state.move_to_recovered(movable)
    return len(movable)


@dataclass
class InterventionPolicy:
    kind: str = "none"
    budget: int = 0
    _order: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown intervention kind {self.kind!r}; expected one of {KINDS}")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")

    def reset(self, state: EpidemicState, net: Network) -> None:
        state.hub_cursor = 0
        self._order = hub_order(net) if self.kind == "hub_target" else None

    def apply(self, state: EpidemicState, net: Network, rng) -> int:
        if self.kind == "none" or self.budget == 0:
            return 0
        if self.kind == "no_target":
            return apply_no_target(state, self.budget, rng)
        if self.kind == "contact_target":
            return apply_contact_target(state, net, self.budget, rng)
        if self._order is None:
            self._order = hub_order(net)
        return apply_hub_target(state, self.budget, self._order)
