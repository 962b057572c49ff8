"""Undirected simple contact graph stored in compressed sparse row form."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected simple graph over nodes ``0..n-1``.

    ``indices[indptr[i]:indptr[i+1]]`` are the sorted neighbours of node ``i``.
    Build instances with :meth:`from_edges`; the arrays are marked read-only.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "Network":
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indptr.flags.writeable = False
        dst = dst.astype(np.int32)
        dst.flags.writeable = False
        return cls(n, indptr, dst)

    @classmethod
    def from_adjacency(cls, adjacency) -> "Network":
        edges = [(i, j) for i, nbrs in enumerate(adjacency) for j in nbrs if i < j]
        return cls.from_edges(len(adjacency), edges)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``i < j``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.n)]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < len(nb) and nb[k] == j)

    @cached_property
    def half_edge_ids(self) -> np.ndarray:
        """Undirected edge id (row in :attr:`edges`) for every entry of ``indices``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        dst = self.indices.astype(np.int64)
        keys = np.minimum(src, dst) * self.n + np.maximum(src, dst)
        edge_keys = self.edges[:, 0].astype(np.int64) * self.n + self.edges[:, 1]
        return np.searchsorted(edge_keys, keys)

    def validate(self) -> None:
        """Full adjacency scan; raises ``ValueError`` on any broken invariant."""
        if len(self.indptr) != self.n + 1 or self.indptr[0] != 0:
            raise ValueError("malformed indptr")
        for i in range(self.n):
            nb = self.neighbors(i)
            if len(nb) and (nb.min() < 0 or nb.max() >= self.n):
                raise ValueError(f"node {i}: neighbour id out of range")
            if np.any(np.diff(nb) <= 0):
                raise ValueError(f"node {i}: duplicate or unsorted neighbours")
            if np.any(nb == i):
                raise ValueError(f"node {i}: self-loop")
            for j in nb:
                if not self.has_edge(int(j), i):
                    raise ValueError(f"edge {i}-{j} is not symmetric")

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None


def write_edgelist(net: Network, path) -> None:
    """Write ``# nodes=<n>`` then one ``i j`` line per edge with ``i < j``."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes={net.n}\n")
        fh.writelines(f"{i} {j}\n" for i, j in net.edges.tolist())
    os.replace(tmp, path)


def read_edgelist(path) -> Network:
    n = None
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line[1:].strip().startswith("nodes="):
                    n = int(line[1:].strip()[len("nodes="):])
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'i j', got {line!r}")
            i, j = int(parts[0]), int(parts[1])
            if i >= j:
                raise ValueError(f"{path}:{lineno}: edges must satisfy i < j")
            edges.append((i, j))
    if n is None:
        raise ValueError(f"{path}: missing '# nodes=<n>' header")
    return Network.from_edges(n, edges)
