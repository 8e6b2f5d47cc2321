import pytest
from hypothesis import settings
from hypothesis import strategies as st

from fracrisk.market_ingest import bin_panel, log_returns, synth_panel
from fracrisk.prospects import Prospect

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def panel():
    return synth_panel(7)


@pytest.fixture(scope="session")
def returns(panel):
    return log_returns(panel)


@pytest.fixture(scope="session")
def universe(returns):
    """(grid, 48 binned prospects) for the seed-7 synthetic panel."""
    return bin_panel(returns, 15)


@pytest.fixture(scope="session")
def stocks(universe):
    return universe[1]


@st.composite
def distributions(draw, min_size=1, max_size=20):
    """Probability vectors built from positive weights (zeros allowed)."""
    w = draw(st.lists(st.floats(0.0, 1.0), min_size=min_size, max_size=max_size).filter(lambda v: sum(v) > 1e-3))
    total = sum(w)
    p = [x / total for x in w]
    return p


@st.composite
def prospects(draw, min_size=1, max_size=8, nonneg=False, label="A"):
    n = draw(st.integers(min_size, max_size))
    lo = 0.0 if nonneg else -0.5
    xs = draw(st.lists(st.floats(lo, 0.5, allow_nan=False), min_size=n, max_size=n))
    w = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    total = sum(w)
    return Prospect(tuple(xs), tuple(v / total for v in w), label)


# --- acceptance reporting ----------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
