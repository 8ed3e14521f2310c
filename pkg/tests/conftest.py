import pytest

from hoare_extract.parser import load_proofs, load_theory

# lines reported by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def proofs():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_proofs(name)
        return cache[name]
    return get


@pytest.fixture(scope="session")
def theory():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_theory(name + ".slt")
        return cache[name]
    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
