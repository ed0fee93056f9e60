import numpy as np
import pytest

import walkgate as wg


@pytest.fixture(scope="session")
def ht():
    return wg.cnot_hamiltonian_time()


@pytest.fixture(scope="session")
def u(ht):
    return wg.unitary(ht)


@pytest.fixture(scope="session")
def um(u):
    return np.asarray(u)


@pytest.fixture(scope="session")
def enc(u):
    return wg.find_encoding(u)


@pytest.fixture(scope="session")
def tables():
    return wg.default_tables()


ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
