"""Independent reference computations used only by the tests.

Everything here is deliberately written apart from the package code
paths: a Jacobi-rotation eigensolver, closed-form kernels, a
piecewise-polynomial construction of the Green's function, the exact
eigenvalues of the r=1 collocation matrix, and continuum eigenfrequency
references for r in {2, 3, 4}.
"""

import math

import numpy as np
from scipy.optimize import brentq


def jacobi_eigh(A, max_sweeps=30, tol=1e-15):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns (eigenvalues descending, eigenvectors as matching columns).
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, (A * A).sum() - (np.diag(A) ** 2).sum()))
        if off <= tol * np.linalg.norm(A):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    order = np.argsort(np.diag(A))[::-1]
    return np.diag(A)[order], V[:, order]


def kernel_r1(a, b, x, y):
    """Closed form of the r=1 kernel."""
    if x > y:
        x, y = y, x
    return (x - a) * (b - y) / (b - a)


def kernel_r2(a, b, x, y):
    """Closed form of the r=2 kernel."""
    if x > y:
        x, y = y, x
    return (x - a) ** 2 * (b - y) ** 2 / (6.0 * (b - a) ** 3) * (
        (b - a) * (y - x) + 2.0 * (b - x) * (y - a)
    )


def bspline_r2(a, b, y, x):
    """Closed form of B[a,a,y,b,b](x) for x <= y."""
    return (x - a) ** 2 / ((y - a) ** 2 * (b - a) ** 2) * (
        (b - a) * (y - x) + 2.0 * (b - x) * (y - a)
    )


def greens_bvp(r, a, b, x, y):
    """g(x, y) built directly from its defining boundary value problem.

    The kernel restricted to each side of y is a polynomial of degree
    2r-1.  Writing the left piece in powers of (x-a)/L and the right
    piece in powers of (b-x)/L, the r boundary conditions at each end
    annihilate the low-order coefficients, and the remaining 2r
    coefficients solve the C^{2r-2} gluing conditions plus the unit jump
    of the (2r-1)-st derivative (sign (-1)^r) at y.  No B-splines here.
    """
    L = b - a
    u = (y - a) / L
    v = (b - y) / L
    idx = np.arange(r, 2 * r)
    M = np.zeros((2 * r, 2 * r))
    rhs = np.zeros(2 * r)
    # continuity of derivatives 0..2r-2, then the jump of order 2r-1
    for k in range(2 * r):
        fall = np.array([math.factorial(i) / math.factorial(i - k) if i >= k else 0.0 for i in idx])
        left = fall * np.where(idx >= k, u ** np.maximum(idx - k, 0), 0.0) / L**k
        right = fall * np.where(idx >= k, v ** np.maximum(idx - k, 0), 0.0) * (-1.0) ** k / L**k
        M[k, :r] = left
        M[k, r:] = -right
        rhs[k] = 0.0
    rhs[2 * r - 1] = -((-1.0) ** r)  # jump: right minus left equals (-1)^r
    coeff = np.linalg.solve(M, rhs)
    cl, cr = coeff[:r], coeff[r:]
    if x <= y:
        return float(np.dot(cl, ((x - a) / L) ** idx))
    return float(np.dot(cr, ((b - x) / L) ** idx))


def discrete_sine_eigenvalue(k, m, span=1.0):
    """Exact k-th eigenvalue of the r=1 collocation matrix.

    For r=1 the matrix is the inverse of the scaled second-difference
    matrix, whose eigenvectors are discrete sines.
    """
    h = span / (m + 1)
    return h * h / (4.0 * math.sin(k * math.pi / (2.0 * (m + 1))) ** 2)


def clamped_omega_r2(k):
    """k-th root of cos(w)cosh(w) = 1, the order-4 clamped frequency."""
    center = (k + 0.5) * math.pi
    return brentq(lambda w: math.cos(w) * math.cosh(w) - 1.0, center - 0.35, center + 0.35, xtol=1e-13)


# Continuum eigenfrequencies omega_k of (-1)^r phi^(2r) = omega^(2r) phi with
# phi^(j)(0) = phi^(j)(1) = 0 for j < r, computed at 50 decimal digits by
# bracketing the real 2r x 2r boundary-condition determinant built from the
# bounded fundamental solutions sin/cos(w x), exp(w cos(theta) x) trig pairs
# anchored at the nearer endpoint.  d_n^{-1/r} equals omega_{n+1-r}.
CONTINUUM_OMEGA = {
    3: (
        6.283185307179586,
        9.427055570888906,
        12.566370614359172,
        15.707953378529623,
        18.849555921538759,
        21.991148617983197,
    ),
    4: (
        7.818707343205939,
        10.995830512186821,
        14.137698385961945,
        17.278822651641658,
        20.420354442226116,
        23.561944441403996,
    ),
}
