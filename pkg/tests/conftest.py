import re

import pytest

_LINES: list[tuple[tuple[int, str], str]] = []


@pytest.fixture
def record():
    """Print one acceptance line and keep it for the end-of-run summary."""

    def _record(tag: str, passed: bool, detail: str) -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {tag}: {detail}"
        print(line)
        num, suffix = re.fullmatch(r"(\d+)(\w*)", tag).groups()
        _LINES.append(((int(num), suffix), line))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
