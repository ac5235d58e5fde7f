"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""

import os

import pytest

_RESULTS: dict[str, list[tuple[bool, str]]] = {}


class _Recorder:
    def __init__(self, criterion: str):
        self.criterion = criterion

    def __call__(self, ok: bool, detail: str) -> bool:
        _RESULTS.setdefault(self.criterion, []).append((bool(ok), detail))
        return bool(ok)


@pytest.fixture
def record(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is None:
        raise RuntimeError("acceptance tests need @pytest.mark.criterion(...)")
    return _Recorder(marker.args[0])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion a test reports under")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_RESULTS):
        rows = _RESULTS[name]
        ok = all(r for r, _ in rows)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name} ({sum(r for r, _ in rows)}/{len(rows)} checks)")
        for r, detail in rows:
            if not r:
                terminalreporter.write_line(f"    failed: {detail}")
    if os.environ.get("HJELMSLEV_ACCEPTANCE_SCOPE", "small") != "all":
        terminalreporter.write_line("(long maximal-arc cells not attempted; set HJELMSLEV_ACCEPTANCE_SCOPE=all)")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call" and rep.failed:
        _RESULTS.setdefault(marker.args[0], []).append((False, f"{item.name} raised or asserted"))
