"""Acceptance suite: the twelve verification criteria behind ``lab verify``.

Each test runs one criterion at seed 0 and prints a single pass/fail line
with the detail the CLI would show.
"""

import pytest

from fflab.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize(
    "number,name",
    [(num, name) for num, name, _, _ in CRITERIA],
    ids=[f"{num:02d}_{name}" for num, name, _, _ in CRITERIA],
)
def test_criterion(number, name):
    result = run_criterion(number, seed=0)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} criterion {number:2d} {name}: {result.detail}")
    assert result.passed, result.detail
