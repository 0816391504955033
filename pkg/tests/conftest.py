import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from secohom import QQ
from secohom.algebra import (
    Triple,
    cyclic_group_table,
    epsilon_map,
    ground_field,
    group_algebra,
    identity_morphism,
    truncated_polynomial_algebra,
)

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"


@pytest.fixture(scope="session")
def dual():
    return truncated_polynomial_algebra(2, QQ, name="D")


@pytest.fixture(scope="session")
def dual_over_k(dual):
    return Triple.classical(dual)


@pytest.fixture(scope="session")
def dual_over_dual(dual):
    return Triple(dual, dual, identity_morphism(dual), name="DD")


@pytest.fixture(scope="session")
def z2_triple():
    G = group_algebra(cyclic_group_table(2), field=QQ, name="kZ2")
    return Triple(G, G, epsilon_map(G, G, [[1, 1], [0, 0]]), name="Z2")


@pytest.fixture(scope="session")
def k():
    return ground_field(QQ)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
