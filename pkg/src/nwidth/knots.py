"""Eigenfunction zeros: the interior knots of the optimal spline spaces.

The rank-k eigenfunction changes sign exactly k-1 times inside the
interval; those crossings are bracketed on the node samples and each one
is polished on a local cubic interpolant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import brentq

from ._io import atomic_write_text, fmt
from .errors import NumericalError, ValidationError
from .eigensolver import Eigenpair, eigenfunction_values
from .nystrom import Grid

#: Samples this close to zero (vectors are max-normalized) count as vanishing.
ZERO_SAMPLE_TOL = 1e-12
DEFAULT_TOL_SCALE = 1e-10

KNOTS_CSV_HEADER = "r,k,index,zero"


@dataclass(frozen=True)
class KnotReport:
    r: int
    eigen_rank: int
    zeros: np.ndarray  # strictly increasing, strictly inside (a, b)
    refinement_tol: float


def _brackets(vals: np.ndarray, m: int) -> list[tuple[int, int]]:
    """Sample index pairs bracketing one sign change each.

    A single vanishing sample flanked by opposite signs widens its
    bracket by one node; two consecutive vanishing samples (or one with
    no sign change around it) mean the mesh cannot separate the zeros.
    """
    inner = vals[1 : m + 1]
    sgn = np.zeros(m + 2, dtype=int)
    sgn[1 : m + 1] = np.where(np.abs(inner) <= ZERO_SAMPLE_TOL, 0.0, np.sign(inner)).astype(int)
    brackets = []
    for i in range(1, m + 1):
        if sgn[i] == 0:
            if i < m and sgn[i + 1] == 0:
                raise NumericalError(
                    "two consecutive samples vanish; mesh under-resolved for this rank"
                )
            if i == 1 or i == m or sgn[i - 1] * sgn[i + 1] >= 0:
                raise NumericalError(
                    "vanishing sample without a sign change around it; mesh under-resolved"
                )
            brackets.append((i - 1, i + 1))
        elif i < m and sgn[i + 1] != 0 and sgn[i] * sgn[i + 1] < 0:
            brackets.append((i, i + 1))
    return brackets


def _refine(nodes: np.ndarray, vals: np.ndarray, ilo: int, ihi: int, tol: float) -> float:
    # cubic through the 4 nearest samples, in units of the mesh size
    lo = min(max(ilo - 1, 0), len(nodes) - 4)
    gh = nodes[1] - nodes[0]
    u = (nodes[lo : lo + 4] - nodes[ilo]) / gh
    coeffs = np.polyfit(u, vals[lo : lo + 4], 3)

    def f(uu: float) -> float:
        return float(np.polyval(coeffs, uu))

    ulo, uhi = 0.0, float((nodes[ihi] - nodes[ilo]) / gh)
    if f(ulo) * f(uhi) >= 0:
        raise NumericalError("sign-change bracket lost during refinement; mesh under-resolved")
    root = brentq(f, ulo, uhi, xtol=max(tol / gh, 1e-15), rtol=8 * np.finfo(float).eps)
    return float(nodes[ilo] + gh * root)


def extract_knots(pair: Eigenpair, grid: Grid, tol: float | None = None, *, r: int) -> KnotReport:
    """Locate and refine all zeros of the rank-k eigenfunction.

    Exactly k-1 zeros must appear; any other count signals an
    under-resolved mesh.  tol defaults to 1e-10 * (b-a).
    """
    nodes = grid.nodes
    span = float(nodes[-1] - nodes[0])
    if tol is None:
        tol = DEFAULT_TOL_SCALE * span
    if tol <= 0:
        raise ValidationError("refinement tolerance must be positive")
    vals = eigenfunction_values(pair, grid)
    brackets = _brackets(vals, grid.m)
    expected = pair.index - 1
    if len(brackets) != expected:
        raise NumericalError(
            f"rank-{pair.index} eigenfunction shows {len(brackets)} sign changes, "
            f"expected {expected}; refine the mesh"
        )
    zeros = np.array([_refine(nodes, vals, i, j, tol) for i, j in brackets])
    if zeros.size > 1 and np.any(np.diff(zeros) <= tol):
        raise NumericalError("adjacent zeros collide within the refinement tolerance")
    zeros.setflags(write=False)
    return KnotReport(r=r, eigen_rank=pair.index, zeros=zeros, refinement_tol=float(tol))


def knots_csv(reports: Iterable[KnotReport]) -> str:
    lines = [KNOTS_CSV_HEADER]
    for report in reports:
        for idx, zero in enumerate(report.zeros, start=1):
            lines.append(f"{report.r},{report.eigen_rank},{idx},{fmt(zero)}")
    return "\n".join(lines) + "\n"


def curve_csv(pair: Eigenpair, grid: Grid) -> str:
    """Node samples of the eigenfunction as two-column CSV x,phi."""
    vals = eigenfunction_values(pair, grid)
    lines = ["x,phi"]
    lines += [f"{fmt(x)},{fmt(v)}" for x, v in zip(grid.nodes, vals)]
    return "\n".join(lines) + "\n"


def eigenfunction_dump(pair: Eigenpair, grid: Grid, path) -> None:
    """Write the eigenfunction samples to path (temp file plus rename)."""
    atomic_write_text(path, curve_csv(pair, grid))
