import functools

import pytest

from heckegor.heckealg import build_algebra, complete_at, mod2_maximal_ideals
from heckegor.modsym import build_space


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="run the level 2089 computations")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: level 2089 runs (enable with --slow)")
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@functools.lru_cache(maxsize=None)
def space(N):
    return build_space(N)


@functools.lru_cache(maxsize=None)
def algebra(N):
    return build_algebra(space(N))


@functools.lru_cache(maxsize=None)
def target_completion(N, k=64):
    """Completion at the residue-degree-1 ideal of largest local rank."""
    T = algebra(N)
    m = max((m for m in mod2_maximal_ideals(T) if m.residue_degree == 1),
            key=lambda m: m.local_dim)
    return complete_at(T, m, k)


# one summary line per acceptance criterion, aggregated over its parts
_criteria: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    rec = _criteria.setdefault(n, {"title": title, "parts": []})
    if call.when == "setup" and item.get_closest_marker("skip"):
        rec["parts"].append((item.name, "skipped"))
    if call.when == "call":
        rec["parts"].append((item.name, "passed" if call.excinfo is None else "failed"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        rec = _criteria[n]
        states = [s for _, s in rec["parts"]]
        if "failed" in states:
            verdict = "FAIL"
        elif "skipped" in states:
            verdict = "PASS (partial, run with --slow)" if "passed" in states else "SKIPPED (--slow)"
        else:
            verdict = "PASS"
        detail = ", ".join(f"{name.split('_', 2)[-1]} {s}" for name, s in rec["parts"])
        tr.write_line(f"criterion {n:2d} {verdict}: {rec['title']} [{detail}]")
