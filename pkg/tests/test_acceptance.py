"""Acceptance suite: one test per criterion, each printing a single
PASS/FAIL line.  Every comparison is exact (tolerance 0)."""

import pytest

from parahecke.verify import CRITERIA, run_criterion

TOLERANCE = 0


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    kwargs = {"samples": 1000, "seed": 0} if k == 8 else {}
    res = run_criterion(k, **kwargs)
    status = "PASS" if res.passed else "FAIL"
    detail = "" if res.passed else f" -- {res.first_failure()}"
    with capsys.disabled():
        print(f"\ncriterion {k}: {status} (exact, tolerance {TOLERANCE}) {res.title}, {len(res.rows)} checks{detail}")
    assert res.rows, "no checks ran"
    for row in res.rows:
        assert row.expected == row.computed, row.item
    assert res.passed
