from __future__ import annotations

import functools

import pytest

from quotsing import catalog

# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@functools.lru_cache(maxsize=None)
def cached_group(name: str):
    return catalog.build(name)


@pytest.fixture
def group():
    return cached_group


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
