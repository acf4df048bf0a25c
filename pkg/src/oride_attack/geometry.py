"""Planar primitives: points, circles, and circle-circle intersection.

All coordinates are meters in a local Cartesian frame.  Every predicate takes
an explicit tolerance; the default ``EPS`` absorbs float rounding at the
coordinate magnitudes we care about (zone sides up to ~1e4 m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Geometric tolerance in meters.
EPS = 1e-6


class DegenerateCirclesError(ValueError):
    """Raised when two circles coincide and the intersection is a full circle."""


@dataclass(frozen=True, order=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.radius) or self.radius < 0.0:
            raise ValueError(f"radius must be finite and >= 0, got {self.radius}")


def distance(a: Point, b: Point) -> float:
    dx = b.x - a.x
    dy = b.y - a.y
    return math.sqrt(dx * dx + dy * dy)


def point_on_circle(p: Point, c: Circle, eps: float = EPS) -> bool:
    """True if p lies within eps of the circle boundary (not the disk)."""
    return abs(distance(p, c.center) - c.radius) <= eps


def _half_chord(d: float, r1: float, r2: float) -> float:
    """Distance from the chord of two crossing circles to the center line.

    Uses the stable sorted-sides triangle area formula, so near-tangent pairs
    (where the naive r1^2 - a^2 cancels catastrophically) stay accurate to
    machine precision relative to the true chord offset.
    """
    hi = r1 if r1 >= r2 else r2
    lo = r1 if r1 < r2 else r2
    sa = hi if hi >= d else d
    sc = lo if lo < d else d
    sm = d if d <= hi else hi
    sb = lo if lo >= sm else sm
    f1 = sa + (sb + sc)
    f2 = sc - (sa - sb)
    f3 = sc + (sa - sb)
    f4 = sa + (sb - sc)
    prod = (f1 * f2) * (f3 * f4)
    return math.sqrt(prod if prod > 0.0 else 0.0) / (2.0 * d)


def circle_intersection(c1: Circle, c2: Circle, eps: float = EPS) -> tuple[Point, ...]:
    """Intersection points of two circle boundaries.

    Returns 0, 1 or 2 points, ordered lexicographically by (x, y).  Strictly
    crossing circles always yield both roots, however close; pairs that do not
    cross but sit within eps of tangency (externally or internally) yield the
    collapsed midpoint root.  Identical circles raise DegenerateCirclesError;
    concentric circles of different radii yield no points, as do separated or
    strictly nested circles.
    """
    r1 = c1.radius
    r2 = c2.radius
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    d = math.sqrt(dx * dx + dy * dy)

    if d <= eps:
        if abs(r1 - r2) <= eps:
            raise DegenerateCirclesError("identical circles: infinite intersections")
        return ()

    rsum = r1 + r2
    rdiff = abs(r1 - r2)
    crossing = d < rsum and d > rdiff
    tangent = not crossing and (abs(d - rsum) <= eps or abs(d - rdiff) <= eps)
    if not (crossing or tangent):
        return ()

    # Foot of the chord (or tangent point) on the center line, from c1.
    a = ((r1 * r1 - r2 * r2) + d * d) / (2.0 * d)
    ex = dx / d
    ey = dy / d
    bx = c1.center.x + a * ex
    by = c1.center.y + a * ey
    if tangent:
        return (Point(bx, by),)

    h = _half_chord(d, r1, r2)
    mey = -ey
    ox = mey * h
    oy = ex * h
    p1 = Point(bx + ox, by + oy)
    p2 = Point(bx - ox, by - oy)
    return (p1, p2) if p1 <= p2 else (p2, p1)
