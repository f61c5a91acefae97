import numpy as np
import pytest

from infodens.mean_field import harmonic_defaults
from infodens.numerics import RadialFunction, RadialGrid

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(set(ACCEPTANCE_LINES)):
            terminalreporter.write_line(line)


def gaussian_density(grid: RadialGrid, width: float) -> RadialFunction:
    """Unit-normalized 3-D Gaussian exp(-r^2/width^2)."""
    r = grid.nodes
    return RadialFunction(grid, np.exp(-(r / width) ** 2) / (np.pi * width**2) ** 1.5)


@pytest.fixture
def harmonic():
    return harmonic_defaults()
