import contextlib
import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sumdiff.groups import Group

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_RESULTS = pytest.StashKey[dict]()


def small_orders(limit: int):
    """Every tuple of cyclic orders >= 2, nondecreasing, with product <= limit."""
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for t in frontier:
            lo = t[-1] if t else 2
            prod = int(np.prod(t)) if t else 1
            for m in range(lo, limit // prod + 1):
                nxt.append(t + (m,))
        out.extend(nxt)
        frontier = nxt
    return out


SMALL_GROUPS = [Group(o) for o in small_orders(32)]


@st.composite
def groups(draw, max_order: int = 36, max_rank: int = 3):
    orders = draw(st.lists(st.integers(1, 6), min_size=1, max_size=max_rank))
    if int(np.prod(orders)) > max_order:
        orders = orders[:1]
    return Group(tuple(orders))


@st.composite
def group_and_elements(draw, k: int = 2, **kw):
    g = draw(groups(**kw))
    els = [draw(st.tuples(*[st.integers(0, m - 1) for m in g.orders])) for _ in range(k)]
    return g, els


@st.composite
def complex_weights(draw, g: Group):
    n = len(g)
    re = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=n, max_size=n))
    im = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=n, max_size=n))
    return np.array(re) + 1j * np.array(im)


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def acceptance(request):
    """Context manager recording one acceptance criterion as PASS or FAIL."""
    results = request.config.stash[_RESULTS]

    @contextlib.contextmanager
    def record(name: str):
        notes = []
        try:
            yield notes.append
        except BaseException:
            results[name] = ("FAIL", "; ".join(map(str, notes)))
            raise
        results[name] = ("PASS", "; ".join(map(str, notes)))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        status, note = results[name]
        terminalreporter.write_line(f"{status}  {name}" + (f"  ({note})" if note else ""))


def all_pairs(n):
    return itertools.product(range(n), repeat=2)
