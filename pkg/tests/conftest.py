from __future__ import annotations

import contextlib

import numpy as np
import pytest
from hypothesis import settings

from confband.model import SeriesMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[str] = []


@pytest.fixture
def four_constants() -> SeriesMatrix:
    """Four constant series 0 (seed), -1, 2, 2 at a single position."""
    return SeriesMatrix(np.array([[0.0], [-1.0], [2.0], [2.0]]), seed_index=0)


@pytest.fixture
def two_series() -> SeriesMatrix:
    """Seed (0, 0) and one more series (1, 2)."""
    return SeriesMatrix(np.array([[0.0, 0.0], [1.0, 2.0]]), seed_index=0)


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(number: int, title: str):
        item = _Criterion(number, title)
        try:
            yield item
        except BaseException:
            _ACCEPTANCE.append(f"FAIL  criterion {number:>2}: {title}  {item.detail}".rstrip())
            raise
        _ACCEPTANCE.append(f"PASS  criterion {number:>2}: {title}  {item.detail}".rstrip())

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
