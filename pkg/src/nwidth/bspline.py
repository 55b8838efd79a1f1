"""Evaluation of a single B-spline from an explicit knot sequence.

The B-spline with knots t_0 <= ... <= t_{p+1} (degree p = #knots - 2) is
evaluated with the Cox-de Boor recurrence in de Boor's triangular form.
The knot sequence is first embedded in a padded local basis, p+1 copies
of an artificial knot strictly below the first knot and strictly above
the last one, which makes the target spline one identifiable member of
that basis; only its coefficient is set to 1 in the recurrence.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class KnotVector:
    """Nondecreasing knot sequence with an associated polynomial degree.

    With the default degree len(knots) - 2 the vector defines a single
    B-spline; a longer vector with an explicit degree describes a local
    basis whose members are the length p+2 windows of the sequence.
    """

    knots: tuple[float, ...]
    degree: int | None = None

    def __post_init__(self):
        knots = tuple(float(t) for t in self.knots)
        if len(knots) < 2:
            raise ValidationError("a knot vector needs at least 2 knots")
        if any(right < left for left, right in zip(knots, knots[1:])):
            raise ValidationError("knots must be nondecreasing")
        if knots[-1] == knots[0]:
            raise ValidationError("all knots equal: the B-spline support is empty")
        degree = self.degree
        if degree is None:
            degree = len(knots) - 2
        if degree < 0:
            raise ValidationError("degree must be nonnegative")
        if len(knots) < degree + 2:
            raise ValidationError(
                f"degree {degree} needs at least {degree + 2} knots, got {len(knots)}"
            )
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "degree", degree)


def _padded(knots: tuple[float, ...], p: int) -> tuple[float, ...]:
    offset = max(1.0, knots[-1] - knots[0])
    return ((knots[0] - offset,) * (p + 1)) + knots + ((knots[-1] + offset,) * (p + 1))


def _deboor(T, p: int, span: int, x: float) -> float:
    # unit coefficient on basis member p+1, i.e. the unpadded spline
    d = [1.0 if span - p + j == p + 1 else 0.0 for j in range(p + 1)]
    for lev in range(1, p + 1):
        for j in range(p, lev - 1, -1):
            tl = T[j + span - p]
            tr = T[j + span + 1 - lev]
            alpha = (x - tl) / (tr - tl)
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j]
    return d[p]


def bspline_eval(kv: KnotVector, x: float) -> float:
    """Value at x of the single B-spline whose knot sequence is kv.knots.

    The spline is right-continuous at interior knots and supported on
    [first knot, last knot]; outside the support the value is 0.  At x
    equal to the last knot the left-limit value is returned, so a spline
    ending in a full-multiplicity knot keeps its limit there while all
    others vanish.
    """
    t = kv.knots
    p = kv.degree
    if len(t) != p + 2:
        raise ValidationError(
            f"single B-spline evaluation needs len(knots) == degree + 2, "
            f"got {len(t)} knots for degree {p}"
        )
    x = float(x)
    if x < t[0] or x > t[-1]:
        return 0.0
    T = _padded(t, p)
    if x == t[-1]:
        # evaluate the polynomial piece left of the last knot
        span = bisect_left(T, x) - 1
    else:
        span = bisect_right(T, x) - 1
    return _deboor(T, p, span, x)
