import pytest

_criterion_lines: list[str] = []


@pytest.fixture
def record_criterion():
    """Collector for one-line acceptance verdicts shown after the run."""
    return _criterion_lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    del exitstatus, config
    if not _criterion_lines:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
