import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import simple_graphs_with_degrees
from hubsim.contact_data import bundled_diary
from hubsim.netgen import generate_dc, generate_er


def _edge_set(net):
    return frozenset(map(tuple, net.edges.tolist()))


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0])
def test_triangle_is_unique_realization(p):
    (only,) = simple_graphs_with_degrees([2, 2, 2])
    for seed in range(20):
        net, rep = generate_dc([2, 2, 2], p, seed)
        assert _edge_set(net) == only
        assert rep.deficit_total == 0


def test_output_is_a_realization_enumerated_by_oracle():
    targets = [3, 2, 2, 2, 1]
    valid = set(simple_graphs_with_degrees(targets))
    assert valid
    for seed in range(50):
        net, rep = generate_dc(targets, 0.3, seed)
        if rep.deficit_total == 0:
            assert _edge_set(net) in valid


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=2, max_size=25), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_realized_never_exceeds_target(targets, p, seed):
    net, rep = generate_dc(targets, p, seed)
    net.validate()
    assert np.all(rep.realized_degrees <= rep.target_degrees)
    assert np.array_equal(rep.realized_degrees, net.degrees)
    assert rep.deficit_total == int(np.sum(rep.target_degrees - rep.realized_degrees))


def test_deterministic_for_seed():
    d = bundled_diary()
    a, ra = generate_dc(d, 0.5, 11)
    b, rb = generate_dc(d, 0.5, 11)
    assert a == b and ra.closure_edges == rb.closure_edges
    c, _ = generate_dc(d, 0.5, 12)
    assert a != c


def test_diary_zero_deficit_at_p0():
    d = bundled_diary()
    for seed in range(5):
        net, rep = generate_dc(d, 0.0, seed)
        assert rep.deficit_total == 0
        assert np.array_equal(net.degrees, d)


def test_closure_raises_clustering():
    from hubsim.netmetrics import avg_clustering
    d = bundled_diary()
    c = [avg_clustering(generate_dc(d, p, 3)[0]) for p in (0.0, 0.5, 1.0)]
    assert c[0] < c[1] < c[2]


def test_closure_trigger_any_also_valid():
    d = bundled_diary()
    net, rep = generate_dc(d, 0.5, 1, closure_trigger="any")
    net.validate()
    assert rep.closure_edges > 0
    with pytest.raises(ValueError):
        generate_dc(d, 0.5, 1, closure_trigger="bogus")


@pytest.mark.parametrize("bad", [[3], [0, 1], [1, -1]])
def test_dc_preconditions(bad):
    with pytest.raises(ValueError):
        generate_dc(bad, 0.0, 0)


def test_dc_bad_p():
    with pytest.raises(ValueError):
        generate_dc([1, 1], 1.5, 0)


def test_report_dict():
    _, rep = generate_dc([1, 1, 1, 1], 0.0, 0)
    d = rep.to_dict()
    assert d["n"] == 4 and d["target_edges_x2"] == 4


def test_er_edge_cases():
    assert generate_er(10, 0.0, 1).n_edges == 0
    tri = generate_er(3, 2.0, 1)
    assert tri.n_edges == 3
    with pytest.raises(ValueError):
        generate_er(5, 5.0, 1)


def test_er_mean_degree():
    means = [generate_er(2029, 9.72, s).degrees.mean() for s in range(5)]
    assert abs(np.mean(means) - 9.72) < 0.2
