from __future__ import annotations

import time
from contextlib import contextmanager

ACCEPTANCE: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, budget: float):
    """Record a PASS/FAIL line for an acceptance criterion, including its time budget."""
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed <= budget, f"took {elapsed:.1f}s, budget {budget:.0f}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:>2}: {status}  {title} ({elapsed:.2f}s, budget {budget:.0f}s)"
        ACCEPTANCE[number] = line
        print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
