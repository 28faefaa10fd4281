"""Acceptance gate: every criterion prints one pass/fail line and must pass
exactly (zero tolerance).  Run with -s to see the lines as they complete."""

import random

import pytest

from hkgtower.acceptance import CRITERIA, DEFAULT_SEED, CriterionResult


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_acceptance(name, fn):
    rng = random.Random(f"{DEFAULT_SEED}:{name}")
    passed, detail = fn(rng)
    result = CriterionResult(name, passed, detail)
    print(result.line())
    assert result.passed, result.line()
