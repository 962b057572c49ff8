"""Degree-calibrated and Erdős–Rényi network generators."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .network import Network

# Consecutive rejected destination draws before switching to an explicit
# candidate list for the current source.
_MAX_REJECTIONS = 32


@dataclass(frozen=True)
class GenReport:
    target_degrees: np.ndarray
    realized_degrees: np.ndarray
    deficit_total: int
    closure_edges: int

    def to_dict(self) -> dict:
        return {
            "n": int(len(self.target_degrees)),
            "target_edges_x2": int(self.target_degrees.sum()),
            "realized_edges_x2": int(self.realized_degrees.sum()),
            "deficit_total": self.deficit_total,
            "deficit_nodes": int((self.realized_degrees < self.target_degrees).sum()),
            "closure_edges": self.closure_edges,
        }


class _ActiveSet:
    """Nodes still open for new edges, with O(1) removal and uniform sampling."""

    def __init__(self, nodes):
        self.items = list(nodes)
        self.pos = {v: k for k, v in enumerate(self.items)}

    def __len__(self):
        return len(self.items)

    def __contains__(self, v):
        return v in self.pos

    def discard(self, v):
        k = self.pos.pop(v, None)
        if k is None:
            return
        last = self.items.pop()
        if k < len(self.items):
            self.items[k] = last
            self.pos[last] = k


CLOSURE_TRIGGERS = ("source", "any")


def generate_dc(targets, p: float, rng_seed, closure_trigger: str = "source") -> tuple[Network, GenReport]:
    """Configuration-model variant that realizes ``targets`` with triadic closure.

    Sources are taken in descending order of remaining degree (ties: lowest id)
    and wired to uniformly random open destinations. When a node saturates, each
    pair of its neighbours that is still open and unlinked is joined with
    probability ``p``. Realized degree never exceeds the target; shortfalls are
    reported in the returned :class:`GenReport`.

    ``closure_trigger`` picks which saturations start a closure round:
    ``"source"`` only the source being wired, ``"any"`` every node that fills
    up, including destinations and closure endpoints (closure then cascades).
    """
    targets = np.asarray(targets, dtype=np.int64)
    n = len(targets)
    if n < 2:
        raise ValueError("need at least two nodes")
    if targets.min() < 1:
        raise ValueError("targets must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if closure_trigger not in CLOSURE_TRIGGERS:
        raise ValueError(f"closure_trigger must be one of {CLOSURE_TRIGGERS}")
    cascade = closure_trigger == "any"
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)

    remaining = targets.tolist()
    adj = [set() for _ in range(n)]
    active = _ActiveSet(range(n))
    closure_edges = 0
    saturated = deque()
    source = -1

    def link(a, b):
        adj[a].add(b)
        adj[b].add(a)
        for v in (a, b):
            remaining[v] -= 1
            if remaining[v] == 0:
                active.discard(v)
                if cascade or v == source:
                    saturated.append(v)

    def close_triads():
        nonlocal closure_edges
        while saturated:
            v = saturated.popleft()
            if p == 0.0:
                continue
            nb = sorted(adj[v])
            for x, a in enumerate(nb):
                for b in nb[x + 1:]:
                    if remaining[a] > 0 and remaining[b] > 0 and b not in adj[a]:
                        if p >= 1.0 or rng.random() < p:
                            link(a, b)
                            closure_edges += 1

    heap = [(-remaining[v], v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        key, s = heapq.heappop(heap)
        if s not in active:
            continue
        if -key != remaining[s]:
            heapq.heappush(heap, (-remaining[s], s))
            continue
        source = s
        while remaining[s] > 0:
            d = _draw_destination(s, adj[s], active, rng)
            if d is None:
                break
            link(s, d)
            close_triads()
        # exhausted sources are closed for good; their shortfall is a deficit
        active.discard(s)

    realized = np.array([len(a) for a in adj], dtype=np.int64)
    edges = [(a, b) for a in range(n) for b in adj[a] if a < b]
    net = Network.from_edges(n, edges)
    report = GenReport(
        target_degrees=targets,
        realized_degrees=realized,
        deficit_total=int(np.maximum(targets - realized, 0).sum()),
        closure_edges=closure_edges,
    )
    return net, report


def _draw_destination(s, nbrs, active, rng):
    """Uniform draw over open nodes that are neither ``s`` nor adjacent to it."""
    items = active.items
    for _ in range(_MAX_REJECTIONS):
        if len(items) <= 1:
            break
        d = items[int(rng.integers(len(items)))]
        if d != s and d not in nbrs:
            return d
    candidates = [d for d in items if d != s and d not in nbrs]
    if not candidates:
        return None
    return candidates[int(rng.integers(len(candidates)))]


def generate_er(n: int, avg_degree: float, rng_seed) -> Network:
    """Binomial G(n, q) graph with ``q = avg_degree / (n - 1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        if avg_degree != 0:
            raise ValueError("avg_degree must be 0 for a single node")
        return Network.from_edges(1, [])
    if not 0.0 <= avg_degree <= n - 1:
        raise ValueError("avg_degree must lie in [0, n-1]")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    q = avg_degree / (n - 1)
    edges = []
    # row by row keeps memory at O(n) per draw
    for i in range(n - 1):
        hit = np.flatnonzero(rng.random(n - 1 - i) < q)
        if len(hit):
            edges.append(np.column_stack([np.full(len(hit), i), hit + i + 1]))
    if not edges:
        return Network.from_edges(n, [])
    return Network.from_edges(n, np.concatenate(edges))
