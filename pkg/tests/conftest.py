import numpy as np
import pytest

_CRITERIA: dict[int, dict] = {}


def unit_rows(rng, m, n):
    V = rng.standard_normal((m, n))
    return V / np.linalg.norm(V, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    for mark in item.iter_markers("criterion"):
        num = mark.args[0]
        entry = _CRITERIA.setdefault(num, {"title": mark.kwargs.get("title", ""), "passed": 0, "failed": 0})
        if rep.when == "call" and rep.passed:
            entry["passed"] += 1
        elif rep.failed:
            entry["failed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        status = "PASS" if e["failed"] == 0 and e["passed"] > 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {num:2d}: {status}  ({e['passed']} checks passed, {e['failed']} failed)  {e['title']}"
        )
