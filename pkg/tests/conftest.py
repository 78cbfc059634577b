import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mosp import build_graph
from mosp.labeling import warmup

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def _compiled():
    warmup()


@st.composite
def small_graphs(draw, max_nodes=7, max_arcs=18, max_cost=6, dims=(1, 2, 3)):
    """Small multigraphs with tiny costs, so ties, zero arcs and parallel arcs are common."""
    n = draw(st.integers(2, max_nodes))
    d = draw(st.sampled_from(dims))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    cost = st.tuples(*[st.integers(0, max_cost)] * d)
    arcs = draw(st.lists(st.tuples(pairs, cost), max_size=max_arcs))
    g = build_graph(n, [(u, v, c) for (u, v), c in arcs], dimension=d)
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 1))
    return g, s, t


# s=0, u=1, v=2, t=3, arcs in this order
DIAMOND = [(0, 2, (3, 3)), (0, 1, (1, 1)), (1, 2, (1, 1)), (2, 3, (1, 1))]


@pytest.fixture
def diamond():
    return build_graph(4, DIAMOND)


_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def report():
    """Record the one-line verdict of an acceptance criterion; printed again at the end of the run."""
    def emit(key: str, ok: bool, detail: str) -> bool:
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[key] = line
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE, key=lambda k: int(k)):
            terminalreporter.write_line(_ACCEPTANCE[key])
