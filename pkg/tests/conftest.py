"""Shared fixtures and the per-criterion acceptance summary."""
import numpy as np
import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20241019)


@pytest.fixture
def record(request):
    """Attach a one-line detail string to the current acceptance test."""
    def _record(text: str) -> None:
        request.node.user_properties.append(("detail", text))
    return _record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num = marker.args[0]
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    if rep.when == "call":
        _RESULTS[num] = ("PASS" if rep.passed else "FAIL", detail)
    elif rep.failed:
        _RESULTS[num] = ("FAIL", f"{rep.when} error")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        status, detail = _RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {detail}")
