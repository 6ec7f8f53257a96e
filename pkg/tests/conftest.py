import pytest

from cyclocat.hopf import build_structure

_acceptance_key = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def H6():
    return build_structure(6)


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Criterion number -> (name, Report), printed in the terminal summary."""
    return request.config.stash.setdefault(_acceptance_key, {})


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_acceptance_key, {})
    if not log:
        return
    tr = terminalreporter
    tr.section("acceptance criteria (exact arithmetic, tolerance 0)")
    for number in sorted(log):
        name, report = log[number]
        tr.write_line(f"[{number:2d}] {name}: {'PASS' if report.passed else 'FAIL'}")
        for check in report.checks:
            tr.write_line("     " + check.line())
    failed = [n for n, (_, r) in log.items() if not r.passed]
    tr.write_line(f"{len(log) - len(failed)}/{len(log)} criteria passed"
                  + (f"; failed {sorted(failed)}" if failed else ""))
