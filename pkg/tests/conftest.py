import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from streak_evidence import bundled_history_path  # noqa: E402


@pytest.fixture
def sample_history_path():
    return Path(str(bundled_history_path()))


@pytest.fixture
def write_csv(tmp_path):
    def _write(text, name="games.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test fails if any check fails."""

    def _check(number, description, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {description} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {description} {detail}"

    return _check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
