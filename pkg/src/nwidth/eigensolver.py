"""Top eigenpairs of the symmetric positive collocation matrix.

The production path is LAPACK's dense symmetric solver (tridiagonalization
plus implicit-shift iteration) through scipy.  The enforced contract is:
strictly descending positive simple eigenvalues, per-pair residuals below
tol_res times the Frobenius norm, pairwise near-orthogonality, max-norm
normalized vectors with a positive leading entry.  A solve that exhausts
the solver's internal iteration budget raises instead of returning
silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, ValidationError
from .nystrom import Grid, NystromSystem

RESIDUAL_TOL = 1e-10
ORTHO_TOL = 1e-8
#: Consecutive eigenvalues closer than this (relative) are treated as a tie,
#: which the totally positive kernel forbids.
TIE_REL_TOL = 1e-13


@dataclass(frozen=True)
class Eigenpair:
    index: int  # 1-based rank by descending eigenvalue
    value: float
    vector: np.ndarray  # interior node values


def _solve_subset(A: np.ndarray, count: int, vectors: bool):
    m = A.shape[0]
    try:
        if vectors:
            w, v = scipy.linalg.eigh(A, subset_by_index=(m - count, m - 1))
            return w[::-1], v[:, ::-1]
        w = scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=(m - count, m - 1))
        return w[::-1], None
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge within its iteration budget: {exc}") from exc


def top_eigenvalues(system: NystromSystem, count: int) -> np.ndarray:
    """The `count` largest eigenvalues in descending order, unchecked.

    Raw solver output: callers that tabulate near the float64 floor flag
    nonpositive or tied values themselves instead of failing hard.
    """
    m = system.matrix.shape[0]
    if not 1 <= count <= m:
        raise ValidationError(f"count must be in [1, {m}], got {count}")
    w, _ = _solve_subset(system.matrix, count, vectors=False)
    return w


def top_eigenpairs(system: NystromSystem, count: int, tol_res: float = RESIDUAL_TOL) -> list[Eigenpair]:
    """The `count` largest eigenpairs, sorted by strictly descending eigenvalue."""
    A = system.matrix
    m = A.shape[0]
    if not 1 <= count <= m:
        raise ValidationError(f"count must be in [1, {m}], got {count}")
    if tol_res <= 0:
        raise ValidationError("tol_res must be positive")
    w, v = _solve_subset(A, count, vectors=True)

    for k in range(count):
        if w[k] <= 0:
            raise NumericalError(
                f"eigenvalue {k + 1} is nonpositive ({w[k]:.3e}); "
                "the requested rank is beyond float64 resolution"
            )
        if k > 0 and w[k - 1] - w[k] <= TIE_REL_TOL * w[k - 1]:
            raise NumericalError(
                f"eigenvalues {k} and {k + 1} tie within {TIE_REL_TOL:g} relative; "
                "the kernel's eigenvalues are simple, so this mesh/rank is unresolved"
            )

    pairs = []
    for k in range(count):
        vec = v[:, k] / np.abs(v[:, k]).max()
        lead = np.flatnonzero(vec)[0]
        if vec[lead] < 0:
            vec = -vec
        vec.setflags(write=False)
        pairs.append(Eigenpair(index=k + 1, value=float(w[k]), vector=vec))

    V = np.column_stack([p.vector for p in pairs])
    residual = A @ V - V * w
    limit = tol_res * np.linalg.norm(A, "fro")
    worst = np.linalg.norm(residual, axis=0).max()
    if worst > limit:
        raise NumericalError(f"eigenpair residual {worst:.3e} exceeds {limit:.3e}")
    norms = np.linalg.norm(V, axis=0)
    gram = (V / norms).T @ (V / norms)
    off = np.abs(gram - np.diag(np.diag(gram))).max() if count > 1 else 0.0
    if off > ORTHO_TOL:
        raise NumericalError(f"eigenvectors lost orthogonality: {off:.3e} > {ORTHO_TOL:g}")
    return pairs


def eigenfunction_values(pair: Eigenpair, grid: Grid) -> np.ndarray:
    """Samples over all nodes xi_0..xi_{m+1}: boundary zeros around the vector."""
    if len(pair.vector) != grid.m:
        raise ValidationError(
            f"vector length {len(pair.vector)} does not match grid with m={grid.m}"
        )
    return np.concatenate(([0.0], pair.vector, [0.0]))
