import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from hubsim.network import Network  # noqa: E402


@st.composite
def small_graphs(draw, max_n=12):
    n = draw(st.integers(2, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return n, sorted(chosen)


def random_graph(rng, n, density):
    iu = np.triu_indices(n, 1)
    keep = rng.random(len(iu[0])) < density
    edges = np.column_stack([iu[0][keep], iu[1][keep]])
    return Network.from_edges(n, edges), [tuple(e) for e in edges.tolist()]


def star(n_leaves):
    return Network.from_edges(n_leaves + 1, [(0, k) for k in range(1, n_leaves + 1)])


@pytest.fixture
def tiny_diary(tmp_path):
    path = tmp_path / "tiny3.txt"
    path.write_text("2\n2\n2\n")
    return path


# one line per acceptance criterion, repeated at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
