import numpy as np
import pytest

from talmopso.cost import AssignmentSolution
from talmopso.network import MobilityModel, NetworkConfig


def tiny_config(**kw):
    base = dict(num_cells=4, num_lists=1, list_size=2, users_per_cell=100.0, paging_rate=0.05,
                grid_rows=2, grid_cols=2, tau_cost=1.0, relocation_cost=1.0, paging_cost=1.0)
    base.update(kw)
    return NetworkConfig(**base)


@pytest.fixture
def tiny():
    return tiny_config()


@pytest.fixture
def hand_mobility():
    """Only cell 0 moves: 0.1 per unit time towards cells 1 and 2."""
    prob = np.zeros((4, 4))
    prob[0, 1] = prob[0, 2] = 0.1
    return MobilityModel.from_matrix(prob)


@pytest.fixture
def hand_solution():
    """One list holding cells 0 and 2 with usage (0.4, 0, 0.6, 0)."""
    return AssignmentSolution.from_lists([[0, 2]], [[0.4, 0.0, 0.6, 0.0]], num_cells=4)


CRITERIA: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    CRITERIA.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
