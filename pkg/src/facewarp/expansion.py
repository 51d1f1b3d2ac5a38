"""Radial eye expansion and contraction.

Each output pixel inside an eye's deformation circle reads the source at a
point pulled toward (``a > 0``) or pushed away from (``a < 0``) the eye
center, so the eye appears enlarged or reduced. Pixels outside the circles
are untouched.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError
from .geometry import Point2, distance, midpoint
from .imaging import BackwardMap, check_image, warp_backward
from .landmarks import (
    LEFT_EYE_CENTER,
    LEFT_EYE_INNER,
    LEFT_EYE_OUTER,
    RIGHT_EYE_CENTER,
    RIGHT_EYE_INNER,
    RIGHT_EYE_OUTER,
    LandmarkSet,
)


class CenterScheme(enum.Enum):
    CENTER_LANDMARK = "landmark"
    CANTHUS_MIDPOINT = "midpoint"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


_EYE_INDICES = {
    Side.LEFT: (LEFT_EYE_CENTER, LEFT_EYE_OUTER, LEFT_EYE_INNER),
    Side.RIGHT: (RIGHT_EYE_CENTER, RIGHT_EYE_OUTER, RIGHT_EYE_INNER),
}


@dataclass(frozen=True)
class ExpansionParams:
    a: float = 50.0
    scheme: CenterScheme = CenterScheme.CENTER_LANDMARK

    def __post_init__(self):
        if not (math.isfinite(self.a) and -100.0 <= self.a <= 100.0):
            raise ValueError(f"expansion strength a must lie in [-100, 100], got {self.a}")
        object.__setattr__(self, "scheme", CenterScheme(self.scheme))


@dataclass(frozen=True)
class EyeGeometry:
    center: Point2
    corner: Point2
    radius: float


def eye_center(lm: LandmarkSet, side: Side, scheme: CenterScheme) -> Point2:
    center, outer, inner = _EYE_INDICES[Side(side)]
    if CenterScheme(scheme) is CenterScheme.CENTER_LANDMARK:
        return lm[center]
    return midpoint(lm[outer], lm[inner])


def eye_geometry(lm: LandmarkSet, side: Side, scheme: CenterScheme) -> EyeGeometry:
    """Deformation circle of one eye: centered on the eye center, through the inner canthus."""
    center = eye_center(lm, side, scheme)
    corner = lm[_EYE_INDICES[Side(side)][2]]
    radius = distance(center, corner)
    if radius == 0.0:
        raise DegenerateGeometryError(
            f"{Side(side).value} eye: center coincides with the inner canthus (zero radius)"
        )
    return EyeGeometry(center, corner, radius)


def expansion_scale(p: Point2, geo: EyeGeometry, a: float) -> float:
    """Scale factor S = 1 - a/100 * (1 - r^2 / R^2) for a point inside the circle."""
    r2 = (p.x - geo.center.x) ** 2 + (p.y - geo.center.y) ** 2
    if r2 >= geo.radius**2:
        raise ValueError(f"point {tuple(p)} lies outside the deformation circle")
    return 1.0 - a / 100.0 * (1.0 - r2 / geo.radius**2)


def reference_pixel(p: Point2, geo: EyeGeometry, s: float) -> Point2:
    if s <= 0.0:
        raise ValueError(f"scale must be positive, got {s}")
    xc, yc = geo.center
    return Point2((p.x - xc) * s + xc, (p.y - yc) * s + yc)


def eye_backward_map(geo: EyeGeometry, a: float, width: int, height: int) -> BackwardMap:
    """Backward map that resamples only the pixels strictly inside the circle."""
    xc, yc = geo.center
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    r2 = (xs - xc) ** 2 + (ys - yc) ** 2
    rad2 = geo.radius**2
    mask = r2 < rad2
    s = np.where(mask, 1.0 - a / 100.0 * (1.0 - r2 / rad2), 1.0)
    return BackwardMap((xs - xc) * s + xc, (ys - yc) * s + yc, mask)


def expand_eyes(
    img: np.ndarray, lm: LandmarkSet, params: ExpansionParams, threads: int = 1
) -> np.ndarray:
    """Enlarge (``a > 0``) or shrink (``a < 0``) both eyes.

    The left eye is processed first and the right eye reads the
    intermediate result, which only matters when the two circles overlap.
    """
    check_image(img)
    h, w = img.shape[:2]
    geos = [eye_geometry(lm, side, params.scheme) for side in (Side.LEFT, Side.RIGHT)]
    out = img
    if params.a == 0.0:
        return img.copy()
    for geo in geos:
        out = warp_backward(out, eye_backward_map(geo, params.a, w, h), threads=threads)
    return out
