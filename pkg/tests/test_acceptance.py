"""Acceptance criteria at their default parameters.

All arithmetic is exact (cyclotomic fields and integers), so every comparison
uses tolerance 0.  The summary hook in conftest prints one line per criterion.
"""
import pytest

from cyclocat.checks import criteria

CRITERIA = criteria(seed=0, budget=10_000)


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"{c.number:02d}-{c.name}" for c in CRITERIA])
def test_criterion(crit, acceptance_log):
    report = crit.run()
    acceptance_log[crit.number] = (crit.name, report)
    assert report.passed, "\n".join(c.line() for c in report.failures())
