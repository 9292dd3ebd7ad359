from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from orbit_verdict.scalar import Scalar

# criterion id -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def rationals(max_num: int = 12, max_den: int = 6):
    return st.builds(
        Fraction, st.integers(-max_num, max_num), st.integers(1, max_den)
    )


def scalars(max_num: int = 12, max_den: int = 6):
    return st.builds(Scalar, rationals(max_num, max_den), rationals(max_num, max_den))


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
