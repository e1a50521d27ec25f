import contextlib
import os
import sys
import time

import hypothesis
import numpy as np
import pytest

np.seterr(all="raise")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        notes: list[str] = []
        try:
            yield notes
        except BaseException as exc:
            detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _emit(f"FAIL criterion {number}: {title} ({detail[:160]})")
            raise
        extra = f"; {'; '.join(notes)}" if notes else ""
        _emit(f"PASS criterion {number}: {title} [{time.perf_counter() - start:.1f}s{extra}]")

    return record


def _emit(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    sys.__stdout__.write(f"\n{line}\n")
    sys.__stdout__.flush()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
