import pytest

from primelab.sieve import build_omega_table, build_prime_table

SMALL_LIMIT = 10**5

_acceptance_outcomes = {}
_acceptance_notes = {}


@pytest.fixture(scope="session")
def primes_small():
    return build_prime_table(SMALL_LIMIT)


@pytest.fixture(scope="session")
def omegas_small(primes_small):
    return build_omega_table(SMALL_LIMIT, primes_small.primes)


@pytest.fixture
def note(request):
    """Attach a measured finding to the acceptance summary line of this test."""

    def add(text):
        _acceptance_notes.setdefault(request.node.name, []).append(text)

    return add


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_outcomes.items():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
        for text in _acceptance_notes.get(name, []):
            terminalreporter.write_line(f"      {text}")
