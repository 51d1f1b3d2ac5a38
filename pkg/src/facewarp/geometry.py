"""Planar geometry primitives.

Coordinates follow the raster convention: x grows to the right, y grows
downward, and the origin is the center of the top-left pixel.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DegenerateGeometryError


class Point2(NamedTuple):
    x: float
    y: float

    def __sub__(self, other: Point2) -> Vec2:  # type: ignore[override]
        return Vec2(self.x - other.x, self.y - other.y)

    def translate(self, v: Vec2) -> Point2:
        return Point2(self.x + v.dx, self.y + v.dy)


class Vec2(NamedTuple):
    dx: float
    dy: float

    def __neg__(self) -> Vec2:
        return Vec2(-self.dx, -self.dy)

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def dot(self, other: Vec2) -> float:
        return self.dx * other.dx + self.dy * other.dy


def midpoint(a: Point2, b: Point2) -> Point2:
    return Point2((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def perp(v: Vec2) -> Vec2:
    """Rotate ``v`` by 90 degrees counterclockwise: (x, y) -> (-y, x)."""
    return Vec2(-v.dy, v.dx)


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    wrapped = math.remainder(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def eye_axis_angle(e_left: Point2, e_right: Point2) -> float:
    """Signed angle between the eye-center vector and the horizontal (1, 0).

    The eye-center vector runs from the left eye center to the right eye
    center. The result lies in (-pi, pi].
    """
    v = e_right - e_left
    if v.dx == 0.0 and v.dy == 0.0:
        raise DegenerateGeometryError(f"eye centers coincide at {tuple(e_left)}")
    return normalize_angle(math.atan2(v.dy, v.dx))


def rotate(p: Point2, theta: float, about: Point2 = Point2(0.0, 0.0)) -> Point2:
    c, s = math.cos(theta), math.sin(theta)
    dx, dy = p.x - about.x, p.y - about.y
    return Point2(about.x + c * dx - s * dy, about.y + s * dx + c * dy)
