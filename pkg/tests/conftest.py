import time
from contextlib import contextmanager

import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion's outcome."""
    results = request.config.stash[ACCEPTANCE]

    @contextmanager
    def run(number, title):
        start = time.perf_counter()
        notes = []
        try:
            yield notes
        except BaseException:
            results[number] = (False, title, time.perf_counter() - start, notes)
            raise
        results[number] = (True, title, time.perf_counter() - start, notes)

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[ACCEPTANCE]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, elapsed, notes = results[number]
        extra = f"; {'; '.join(notes)}" if notes else ""
        terminalreporter.write_line(
            f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title} ({elapsed:.2f}s{extra})")
