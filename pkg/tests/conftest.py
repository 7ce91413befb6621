import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finspan import caps as _caps
from finspan.group import by_name
from finspan.gset import GSet, equivariant_maps

settings.register_profile(
    "finspan", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("finspan")

SMALL_GROUPS = ["1", "C2", "C3", "S3"]
_GROUPS = {}
ACCEPTANCE_LINES = []


def group(name):
    if name not in _GROUPS:
        _GROUPS[name] = by_name(name)
    return _GROUPS[name]


@st.composite
def gsets(draw, names=SMALL_GROUPS, max_size=4, min_size=0):
    G = group(draw(st.sampled_from(names)))
    return draw(gsets_over(G, max_size, min_size))


@st.composite
def gsets_over(draw, G, max_size=4, min_size=0):
    classes = G.subgroup_classes
    counts = [0] * len(classes)
    size = 0
    budget = draw(st.integers(min_size, max_size))
    for _ in range(6):
        i = draw(st.integers(0, len(classes) - 1))
        orbit = G.order // len(G.class_rep(i))
        if size + orbit <= budget:
            counts[i] += 1
            size += orbit
    return GSet.from_classes(G, counts)


@st.composite
def maps_between(draw, X, Y):
    ms = list(equivariant_maps(X, Y))
    if not ms:
        return None
    return draw(st.sampled_from(ms))


@pytest.fixture(autouse=True)
def _default_caps():
    old = _caps.set_current(_caps.DEFAULT_CAPS)
    yield
    _caps.set_current(old)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
