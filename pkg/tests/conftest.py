import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ktopos.poset import FinPoset

settings.register_profile("ktopos", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ktopos")


@st.composite
def posets(draw, min_size=0, max_size=5):
    """Random posets: a random DAG on 0..n-1 with edges going up in index."""
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return FinPoset.from_relation([perm[i] for i in range(n)],
                                  [(perm[a], perm[b]) for a, b in chosen])


@st.composite
def rooted_posets(draw, max_size=4):
    P = draw(posets(min_size=0, max_size=max_size - 1))
    els = list(P.elements)
    return FinPoset.from_relation(["root"] + els, [("root", e) for e in els]
                                  + [(a, b) for a, b in P.relation() if a != b])


@pytest.fixture(scope="session")
def small_posets():
    from ktopos import catalog

    return catalog.posets_up_to(4)


_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args[0], mark.args[1]
    prev = _criteria.get(num, (title, True, 0.0))
    passed = prev[1] and not rep.failed
    _criteria[num] = (title, passed, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, passed, secs = _criteria[num]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {num:>2}  {title} ({secs:.1f} s)")
