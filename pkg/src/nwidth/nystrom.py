"""Uniform grid and trapezoid-rule collocation matrix of the kernel eigenproblem.

The matrix stores h * g(xi_k, xi_l) over the interior nodes, so its
eigenvalues approximate the integral-operator eigenvalues directly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._io import fmt
from .errors import ValidationError
from .kernel import Kernel, Interval, kernel_column


@dataclass(frozen=True)
class Grid:
    """Uniform nodes xi_0..xi_{m+1}; m interior nodes, mesh size h."""

    m: int
    h: float
    nodes: np.ndarray


def build_grid(interval: Interval, m: int) -> Grid:
    if int(m) != m or m < 1:
        raise ValidationError(f"need at least one interior node (m >= 1), got m={m}")
    m = int(m)
    h = interval.span / (m + 1)
    nodes = interval.a + h * np.arange(m + 2)
    nodes[-1] = interval.b  # clamp: no 1-ulp overshoot past b
    if not np.all(np.diff(nodes) > 0):
        raise ValidationError(f"degenerate grid: m={m} is too fine for {interval}")
    nodes.setflags(write=False)
    return Grid(m=m, h=h, nodes=nodes)


@dataclass(frozen=True)
class NystromSystem:
    kernel: Kernel
    grid: Grid
    matrix: np.ndarray  # m x m, symmetric, entries h * g(xi_k, xi_l) > 0


def assemble(kernel: Kernel, grid: Grid, threads: int | None = None) -> NystromSystem:
    """Assemble h * g(xi_k, xi_l); only the upper triangle is evaluated.

    Columns are independent, so they may be filled by `threads` workers;
    each entry is produced by the same single vectorized column
    evaluation either way, keeping the result bit-identical.
    """
    iv = kernel.interval
    if grid.nodes[0] != iv.a or grid.nodes[-1] != iv.b:
        raise ValidationError("grid interval does not match kernel interval")
    m, h, nodes = grid.m, grid.h, grid.nodes
    A = np.zeros((m, m))

    def fill(columns) -> None:
        for col in columns:
            y = nodes[col + 1]
            A[: col + 1, col] = h * kernel_column(kernel, y, nodes[1 : col + 2])

    if threads is None or threads <= 1 or m < 64:
        fill(range(m))
    else:
        chunk = -(-m // threads)
        ranges = [range(lo, min(lo + chunk, m)) for lo in range(0, m, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for _ in pool.map(fill, ranges):
                pass
    A += np.triu(A, 1).T
    A.setflags(write=False)
    return NystromSystem(kernel=kernel, grid=grid, matrix=A)


def matrix_text(system: NystromSystem) -> str:
    """Debug dump: whitespace-separated float64 text, one row per line."""
    rows = (" ".join(fmt(v) for v in row) for row in system.matrix)
    return "\n".join(rows) + "\n"
