import numpy as np
import pytest
from hypothesis import assume
from hypothesis import strategies as st

from threebox.railspace import inner, make_state


def random_state(rng, dim=3, real=False):
    v = rng.normal(size=dim)
    if not real:
        v = v + 1j * rng.normal(size=dim)
    return make_state(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, dim=None, real=False):
    n = draw(st.integers(2, 6)) if dim is None else dim
    re = draw(st.lists(finite, min_size=n, max_size=n))
    im = [0.0] * n if real else draw(st.lists(finite, min_size=n, max_size=n))
    v = np.array(re) + 1j * np.array(im)
    if np.linalg.norm(v) < 1e-3:
        v[0] += 1.0
    return make_state(v)


@st.composite
def state_pairs(draw, dim=None, real=False, min_overlap=0.0):
    n = draw(st.integers(2, 6)) if dim is None else dim
    pre = draw(states(dim=n, real=real))
    post = draw(states(dim=n, real=real))
    assume(abs(inner(post, pre)) > min_overlap)
    return pre, post


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.failed:
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items(), key=lambda kv: _criterion_key(kv[0])):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


def _criterion_key(name):
    digits = "".join(c for c in name.split("_")[2] if c.isdigit()) if name.count("_") >= 2 else ""
    return (int(digits) if digits else 99, name)
