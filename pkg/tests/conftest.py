import pytest

from flowcutter import CookieMap, FlowEngine

_CRITERION_LINES: list[str] = []


@pytest.fixture(scope="session")
def engine():
    return FlowEngine(tol=1e-13)


@pytest.fixture(scope="session")
def cmap():
    # shared certified map; grid 4096 matches the acceptance configuration
    return CookieMap.certified(grid_n=4096, tol=1e-13)


@pytest.fixture(scope="session")
def consts(cmap):
    return cmap.constants


@pytest.fixture(scope="session")
def calibration_map():
    return CookieMap.calibration()


@pytest.fixture
def record_criterion():
    """Collect acceptance pass/fail lines for the terminal summary."""

    def _record(name: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        _CRITERION_LINES.append(f"[{status}] {name}{suffix}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
