import numpy as np
import pytest
from hypothesis import given, settings

from conftest import small_graphs
from hubsim.network import Network, read_edgelist, write_edgelist


def test_from_edges_sorted_symmetric():
    net = Network.from_edges(4, [(2, 0), (0, 1), (3, 1)])
    assert net.adjacency == [[1, 2], [0, 3], [0], [1]]
    assert net.degrees.tolist() == [2, 2, 1, 1]
    assert net.n_edges == 3
    assert net.edges.tolist() == [[0, 1], [0, 2], [1, 3]]
    net.validate()


def test_arrays_read_only():
    net = Network.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        net.indices[0] = 2


def test_out_of_range_edge():
    with pytest.raises(ValueError):
        Network.from_edges(2, [(0, 2)])


def test_validate_rejects_self_loop_and_asymmetry():
    bad = Network(2, np.array([0, 1, 1]), np.array([1], dtype=np.int32))
    with pytest.raises(ValueError):
        bad.validate()
    loop = Network(1, np.array([0, 1]), np.array([0], dtype=np.int32))
    with pytest.raises(ValueError):
        loop.validate()


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_half_edge_ids_map_to_edges(g):
    n, edges = g
    net = Network.from_edges(n, edges)
    for v in range(n):
        for k in range(net.indptr[v], net.indptr[v + 1]):
            a, b = net.edges[net.half_edge_ids[k]]
            assert {int(a), int(b)} == {v, int(net.indices[k])}


@settings(max_examples=40, deadline=None)
@given(small_graphs())
def test_edgelist_roundtrip(tmp_path_factory, g):
    n, edges = g
    net = Network.from_edges(n, edges)
    path = tmp_path_factory.mktemp("el") / "g.edges"
    write_edgelist(net, path)
    assert read_edgelist(path) == net


def test_read_edgelist_requires_header(tmp_path):
    p = tmp_path / "x.edges"
    p.write_text("0 1\n")
    with pytest.raises(ValueError):
        read_edgelist(p)
