"""Network statistics: degree moments, clustering, path lengths."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .network import Network

CSV_COLUMNS = ("avg_degree", "median_degree", "stdev_degree", "clustering",
               "deg_clust_corr", "avg_path_length", "diameter")


class UndefinedCorrelation(ValueError):
    pass


@dataclass(frozen=True)
class NetworkMetrics:
    avg_degree: float
    median_degree: float
    stdev_degree: float
    avg_clustering: float
    degree_clustering_corr: float
    avg_path_length: float
    diameter: int

    def csv_row(self) -> list:
        d = asdict(self)
        return [d["avg_degree"], d["median_degree"], d["stdev_degree"], d["avg_clustering"],
                d["degree_clustering_corr"], d["avg_path_length"], d["diameter"]]


def _adjacency_matrix(net: Network) -> sparse.csr_matrix:
    data = np.ones(len(net.indices), dtype=np.int64)
    return sparse.csr_matrix((data, net.indices, net.indptr), shape=(net.n, net.n))


def triangle_counts(net: Network) -> np.ndarray:
    """Number of edges among the neighbours of each node."""
    a = _adjacency_matrix(net)
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def clustering_vector(net: Network) -> np.ndarray:
    k = net.degrees.astype(float)
    pairs = k * (k - 1) / 2
    out = np.zeros(net.n)
    ok = k >= 2
    out[ok] = triangle_counts(net)[ok] / pairs[ok]
    return out


def local_clustering(net: Network, node: int) -> float:
    nb = net.neighbors(node)
    k = len(nb)
    if k < 2:
        return 0.0
    nbset = set(nb.tolist())
    links = sum(1 for a in nb for b in net.neighbors(a) if a < b and b in nbset)
    return links / (k * (k - 1) / 2)


def avg_clustering(net: Network) -> float:
    """Mean local clustering; nodes of degree < 2 count as 0."""
    return float(clustering_vector(net).mean())


def degree_clustering_correlation(net: Network) -> float:
    """Pearson correlation of degree and local clustering over nodes of degree >= 2."""
    k = net.degrees
    ok = k >= 2
    if ok.sum() < 2:
        raise UndefinedCorrelation("fewer than two nodes with degree >= 2")
    x = k[ok].astype(float)
    y = clustering_vector(net)[ok]
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelation("zero variance in degree or clustering")
    return float(np.corrcoef(x, y)[0, 1])


def largest_component(net: Network) -> np.ndarray:
    _, labels = csgraph.connected_components(_adjacency_matrix(net), directed=False)
    sizes = np.bincount(labels)
    # lowest label wins ties, which is the component of the lowest node id
    return np.flatnonzero(labels == np.argmax(sizes))


@numba.njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@numba.njit(cache=True)
def _bfs_all_pairs(indptr, indices):
    """Sum of all ordered-pair distances and the largest distance (connected graph).

    Breadth-first search from 64 sources at once, one bit per source.
    """
    n = len(indptr) - 1
    total = 0
    diameter = 0
    visited = np.empty(n, dtype=np.uint64)
    frontier = np.empty(n, dtype=np.uint64)
    nxt = np.empty(n, dtype=np.uint64)
    for start in range(0, n, 64):
        visited[:] = 0
        frontier[:] = 0
        for b in range(min(64, n - start)):
            visited[start + b] = np.uint64(1) << np.uint64(b)
            frontier[start + b] = visited[start + b]
        level = 0
        while True:
            level += 1
            found = 0
            for v in range(n):
                acc = np.uint64(0)
                for k in range(indptr[v], indptr[v + 1]):
                    acc |= frontier[indices[k]]
                acc &= ~visited[v]
                nxt[v] = acc
                if acc:
                    found += _popcount(acc)
            if found == 0:
                break
            total += level * found
            diameter = max(diameter, level)
            for v in range(n):
                visited[v] |= nxt[v]
                frontier[v] = nxt[v]
    return total, diameter


def path_metrics(net: Network) -> tuple[float, int]:
    """Average shortest-path length and diameter within the largest component.

    The average runs over ordered pairs of distinct nodes. A component of one
    node yields ``(0.0, 0)``.
    """
    if net.n < 2:
        raise ValueError("need at least two nodes")
    comp = largest_component(net)
    m = len(comp)
    if m < 2:
        return 0.0, 0
    sub = _adjacency_matrix(net)[comp][:, comp].tocsr()
    sub.sort_indices()
    total, diameter = _bfs_all_pairs(sub.indptr.astype(np.int64), sub.indices.astype(np.int64))
    return total / (m * (m - 1)), int(diameter)


def degree_summary(net: Network) -> tuple[float, float, float]:
    k = net.degrees
    return float(k.mean()), float(np.median(k)), float(k.std())


def compute_metrics(net: Network) -> NetworkMetrics:
    mean, median, sd = degree_summary(net)
    try:
        corr = degree_clustering_correlation(net)
    except UndefinedCorrelation:
        corr = float("nan")
    apl, diam = path_metrics(net)
    return NetworkMetrics(mean, median, sd, avg_clustering(net), corr, apl, diam)
