import sys
from pathlib import Path

import numpy as np
import pytest

from roosperm import _backend

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=_backend.available())
def backend(request):
    """Run a test once per available kernel backend."""
    with _backend.use_backend(request.param) as mod:
        yield mod


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """``record(number, ok, detail)``: one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
