import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sbmeme.core import TimeSeries  # noqa: E402


@pytest.fixture
def series():
    def make(values, meme_id="m"):
        return TimeSeries(meme_id, np.asarray(values, dtype=float))
    return make


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""
    def record(cid, ok, detail):
        line = f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
