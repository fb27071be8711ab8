"""Shared fixtures: the house graph with its hand-solved extremal pair, and small graphs."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from walkmod import Graph, Walk, parse_edge_list
from walkmod.generators import HOUSE_EDGE_LIST, sample_connected_gnp

# Edge order (1,2), (1,5), (5,2), (1,4), (4,3), (3,2).
# rho0 makes all three simple 1 -> 2 paths unit length; stationarity
# 2 rho(e) = sum_i lam_i m_i(e) then gives lam edge by edge.
RHO0 = (1.0, 0.5, 0.5, 1 / 3, 1 / 3, 1 / 3)
RHO0_EXACT = (Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
LAM0 = (2.0, 1.0, 2 / 3)
MOD_HOUSE = 11 / 6


@pytest.fixture
def house() -> Graph:
    return parse_edge_list(HOUSE_EDGE_LIST)


@pytest.fixture
def house_paths(house):
    return [
        Walk.from_labels(house, ["1", "2"]),
        Walk.from_labels(house, ["1", "5", "2"]),
        Walk.from_labels(house, ["1", "4", "3", "2"]),
    ]


@pytest.fixture
def rho0() -> np.ndarray:
    return np.array(RHO0)


@pytest.fixture
def path3() -> Graph:
    return parse_edge_list("1 2\n2 3\n")


def path_graph(L: int) -> Graph:
    return Graph(L + 1, [(i, i + 1) for i in range(L)], [str(i + 1) for i in range(L + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)], [str(i + 1) for i in range(n)])


def random_graphs(count: int, n_max: int, seed: int, n_min: int = 3):
    """Seeded connected G(n, p) draws with ``n_min <= n <= n_max``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        g, _ = sample_connected_gnp(n, float(rng.uniform(0.35, 1.0)), rng)
        out.append(g)
    return out


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
