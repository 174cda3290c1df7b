import pytest

_acceptance = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_acceptance] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, ok, detail)``."""
    lines = request.config.stash[_acceptance]

    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}"
        print(line)
        lines.append((n, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_acceptance]
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
