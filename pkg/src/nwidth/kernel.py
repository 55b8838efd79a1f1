"""Green's function kernel of the order-2r two-point Dirichlet problem.

For x <= y the kernel is a scaled B-spline in x whose knot sequence
stacks r copies of each interval endpoint around the interior knot y,

    g(x, y) = (y-a)^r (b-y)^r / ((2r-1)! (b-a)) * B[a,..,a,y,b,..,b](x),

and g(x, y) = g(y, x) for x > y.  g vanishes whenever x or y hits an
endpoint, is symmetric, and is strictly positive inside the open square
(a,b) x (a,b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

#: Largest derivative order the float64 prefactor is validated for.
MAX_R = 20


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError("interval endpoints must be finite")
        if not a < b:
            raise ValidationError(f"interval needs a < b, got ({a}, {b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def span(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class Kernel:
    """Derivative order r >= 1 together with the interval (a, b)."""

    r: int
    interval: Interval

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ValidationError(f"derivative order r must be an integer >= 1, got {self.r}")
        object.__setattr__(self, "r", int(self.r))


def factorial_scale(r: int, y: float, interval: Interval, *, allow_any_r: bool = False) -> float:
    """Scalar prefactor (y-a)^r (b-y)^r / ((2r-1)! (b-a)).

    Multiplications and divisions are interleaved so the intermediate
    products stay far from float64 overflow and underflow for r <= 20.
    """
    if r < 1 or (r > MAX_R and not allow_any_r):
        raise ValidationError(
            f"r={r} outside the supported range [1, {MAX_R}] "
            "(pass allow_any_r=True to override)"
        )
    a, b = interval.a, interval.b
    if y < a or y > b:
        raise ValidationError(f"y={y} outside [{a}, {b}]")
    acc = (y - a) * (b - y) / (b - a)
    for j in range(2, r + 1):
        acc *= (y - a) / (2 * j - 1)
        acc *= (b - y) / (2 * j - 2)
    return acc


def _bspline_factor(r: int, a: float, b: float, y: float, xs: np.ndarray) -> np.ndarray:
    """B[a,..,a,y,b,..,b](xs) with r copies of a and b, for points xs <= y.

    Every point lies in the knot span ending at y, so de Boor's triangle
    runs with scalar knots; the left knot of every division is a and the
    right knot is y exactly when the inner index equals the level.  At
    x == y the span polynomial yields the left-limit value, which equals
    the spline value because the spline is C^{2r-2} at its interior knot.
    """
    p = 2 * r - 1
    xs = np.asarray(xs, dtype=float)
    ay = (xs - a) / (y - a)
    by = (y - xs) / (y - a)
    ab = (xs - a) / (b - a)
    bb = (b - xs) / (b - a)
    d = np.zeros((p + 1,) + xs.shape)
    d[r] = 1.0
    for lev in range(1, p + 1):
        for j in range(min(p, r + lev), max(lev, r) - 1, -1):
            if j == lev:
                al, be = ay, by
            else:
                al, be = ab, bb
            d[j] = be * d[j - 1] + al * d[j]
    return d[p]


def kernel_column(k: Kernel, y: float, xs: np.ndarray) -> np.ndarray:
    """g(xs_i, y) for a batch of points with xs_i <= y < b (assembly fast path)."""
    a, b = k.interval.a, k.interval.b
    scale = factorial_scale(k.r, y, k.interval)
    return scale * _bspline_factor(k.r, a, b, y, xs)


def kernel_eval(k: Kernel, x: float, y: float) -> float:
    """g(x, y), reduced to the x <= y case through the symmetry g(x,y) = g(y,x)."""
    a, b = k.interval.a, k.interval.b
    if x < a or x > b:
        raise ValidationError(f"x={x} outside [{a}, {b}]")
    if y < a or y > b:
        raise ValidationError(f"y={y} outside [{a}, {b}]")
    lo, hi = (x, y) if x <= y else (y, x)
    if lo == a or hi == b:
        return 0.0
    return float(kernel_column(k, hi, np.array([lo]))[0])
