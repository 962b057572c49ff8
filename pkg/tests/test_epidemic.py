import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from hubsim.contact_data import bundled_diary
from hubsim.epidemic import (E, I, S, DiseaseParams, compute_r0, init_epidemic, run_to_completion,
                             step_day, trajectory_array, write_trajectory)
from hubsim.netgen import generate_dc
from hubsim.network import Network


@pytest.fixture(scope="module")
def dc_net():
    return generate_dc(bundled_diary(), 0.0, 1)[0]


def test_init_five_seeds(dc_net):
    st_ = init_epidemic(dc_net, DiseaseParams(), 3)
    assert st_.counts() == (2024, 5, 0, 0)
    assert st_.ever_infected.sum() == 5


def test_all_seeded():
    net = Network.from_edges(4, [(0, 1)])
    st_ = init_epidemic(net, DiseaseParams(n_seeds=4), 0)
    assert st_.counts() == (0, 4, 0, 0)
    with pytest.raises(ValueError):
        init_epidemic(net, DiseaseParams(n_seeds=5), 0)


def test_zero_sd_edges_exact(dc_net):
    st_ = init_epidemic(dc_net, DiseaseParams(r_mean=0.05, r_sd=0.0), 1)
    assert np.all(st_.edge_transmission_prob == 0.05)
    st2 = init_epidemic(dc_net, DiseaseParams(), 1)
    p = st2.edge_transmission_prob
    assert p.min() >= 0 and p.max() <= 1 and len(p) == dc_net.n_edges


def test_recovery_draws_in_range(dc_net):
    st_ = init_epidemic(dc_net, DiseaseParams(n_seeds=2000), 2)
    rt = st_.recovery_time[st_.ever_infected]
    rp = st_.recovery_prob[st_.ever_infected]
    assert rt.min() >= 7 and rt.max() <= 42 and abs(rt.mean() - 14) < 0.5
    assert rp.min() >= 0.990 and rp.max() <= 0.996


def test_zero_transmission_size_five(dc_net):
    recs = run_to_completion(dc_net, DiseaseParams(r_mean=0.0, r_sd=0.0), None, 5)
    assert recs[-1].cumulative_infected == 5
    assert recs[-1].E == recs[-1].I == 0 and recs[-1].R == 5
    assert all(r.new_infections == 0 for r in recs)


def test_certain_transmission_single_edge():
    net = Network.from_edges(2, [(0, 1)])
    params = DiseaseParams(r_mean=1.0, r_sd=0.0, n_seeds=0)
    st_ = init_epidemic(net, params, 0)
    st_.compartment[0] = I
    st_.days_in_compartment[0] = 0
    st_.recovery_time[0] = 10
    rec = step_day(st_, net, params, None, np.random.default_rng(0))
    assert rec.new_infections == 1 and st_.compartment[1] == E


def test_no_challenge_after_window():
    net = Network.from_edges(2, [(0, 1)])
    params = DiseaseParams(r_mean=1.0, r_sd=0.0, n_seeds=0)
    st_ = init_epidemic(net, params, 0)
    st_.compartment[0] = I
    st_.days_in_compartment[0] = params.infectious_window_days
    st_.recovery_time[0] = 30
    for _ in range(5):
        step_day(st_, net, params, None, np.random.default_rng(0))
    assert st_.compartment[1] == S and st_.compartment[0] == I


def test_bit_identical_reruns(dc_net):
    a = trajectory_array(run_to_completion(dc_net, DiseaseParams(), None, 77))
    b = trajectory_array(run_to_completion(dc_net, DiseaseParams(), None, 77))
    assert np.array_equal(a, b)


def test_event_log_timing(dc_net):
    params = DiseaseParams()
    recs, st_ = run_to_completion(dc_net, params, None, 4, record_events=True, return_state=True)
    assert st_.cumulative > 50
    infections = [e for e in st_.events if e[0] == "infection"]
    onsets = [e for e in st_.events if e[0] == "onset"]
    assert infections and onsets
    assert all(0 <= e[4] < params.infectious_window_days for e in infections)
    assert all(e[3] == params.latency_days for e in onsets)
    # each infected agent becomes infectious exactly latency_days after infection
    infected_day = {e[3]: e[1] for e in infections}
    for _, day, agent, _ in onsets:
        if agent in infected_day:
            assert day - infected_day[agent] == params.latency_days


def test_transmission_days_per_agent(dc_net):
    params = DiseaseParams(r_mean=0.2)
    _, st_ = run_to_completion(dc_net, params, None, 8, record_events=True, return_state=True)
    onset = {e[2]: e[1] for e in st_.events if e[0] == "onset"}
    for _, day, infector, _, _ in (e for e in st_.events if e[0] == "infection"):
        assert 1 <= day - onset[infector] <= params.infectious_window_days


def test_trajectory_csv(tmp_path, dc_net):
    recs = run_to_completion(dc_net, DiseaseParams(), None, 1, max_days=10)
    path = tmp_path / "t.csv"
    write_trajectory(recs, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "day,S,E,I,R,new_infections,cumulative_infected,interventions"
    assert len(lines) == len(recs) + 1 and recs[0].day == 0 and recs[-1].day == 10


def test_compute_r0_formula():
    # star with 4 leaves: <k> = 8/5, <k^2> = 20/5 -> (4 - 1.6) / 1.6 = 1.5
    net = Network.from_edges(5, [(0, k) for k in range(1, 5)])
    assert compute_r0(net, DiseaseParams(r_mean=0.1)) == pytest.approx(0.1 * 4 * 1.5)
    assert compute_r0(net, DiseaseParams(r_mean=0.0, r_sd=0.0)) == 0.0
    assert compute_r0(Network.from_edges(3, []), DiseaseParams()) == 0.0


def test_params_validation():
    with pytest.raises(ValueError):
        DiseaseParams(recovery_time_mean_days=50)
    with pytest.raises(ValueError):
        DiseaseParams(r_mean=1.5)
    with pytest.raises(ValueError):
        DiseaseParams(latency_days=0)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 40), st.floats(0.05, 0.6), st.floats(0.0, 0.5), st.integers(0, 10**6))
def test_conservation_and_monotone_cumulative(n, density, r, seed):
    net, _ = random_graph(np.random.default_rng(seed), n, density)
    params = DiseaseParams(r_mean=r, n_seeds=min(3, n))
    recs = run_to_completion(net, params, None, seed, max_days=200)
    cum = [x.cumulative_infected for x in recs]
    assert all(x.S + x.E + x.I + x.R == n for x in recs)
    assert cum == sorted(cum) and cum[0] == params.n_seeds
    assert all(b.cumulative_infected - a.cumulative_infected == b.new_infections for a, b in zip(recs, recs[1:]))
