"""Acceptance criteria 1-11, each at its stated tolerance and runtime budget.

One PASS/FAIL line per criterion is printed (and repeated in the terminal summary).
"""
import pytest

from cfkernel.suites import CRITERIA, DEFAULT_SEED, run_suite

# wall-clock budgets in seconds where the criterion states one
BUDGET = {1: 30, 2: 5, 3: 60, 5: 120, 9: 300}

RESULTS: list[str] = []


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    rep = run_suite(CRITERIA[number], seed=DEFAULT_SEED)
    within = number not in BUDGET or rep.elapsed < BUDGET[number]
    ok = rep.passed and within
    budget = f", budget {BUDGET[number]} s" if number in BUDGET else ""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({rep.name}): {rep.summary()[5:]}{budget}"
    RESULTS.append(line)
    print(line)
    for extra in rep.lines:
        print("    " + extra)
    assert rep.passed, "\n".join([line, *rep.lines])
    assert within, f"criterion {number} took {rep.elapsed:.1f} s"
