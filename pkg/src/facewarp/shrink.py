"""Plan the nose/mouth/cheek shrink as MLS control pairs.

Fifty-one landmarks drive the shrink: 15 nose, 13 mouth and 21 cheek points
that are pushed toward the face midline along the eye axis, plus the two eye
centers, which are pinned by default (gain 0) so the shrink does not drag the
eyes. The midline is the perpendicular of the
eye-center vector through the eye midpoint; points within ``axis_epsilon``
of it stay put. Optional zero-displacement anchors along the image border
keep the frame from drifting.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateConfigurationError
from .geometry import Point2, distance, eye_axis_angle, midpoint
from .landmarks import (
    CHIN,
    GROUP_RANGES,
    LEFT_EYE_CENTER,
    MOUTH_INNER_TOP_CENTER,
    RIGHT_EYE_CENTER,
    GroupId,
    LandmarkSet,
)
from .mls import ControlPairSet

log = logging.getLogger(__name__)

NOSE_INDICES = tuple(GROUP_RANGES[GroupId.NOSE])
MOUTH_INDICES = tuple(GROUP_RANGES[GroupId.MOUTH_OUTER]) + (MOUTH_INNER_TOP_CENTER,)
CHEEK_INDICES = tuple(range(CHIN - 10, CHIN + 11))
EYE_INDICES = (LEFT_EYE_CENTER, RIGHT_EYE_CENTER)
CONTROL_INDICES = NOSE_INDICES + MOUTH_INDICES + CHEEK_INDICES + EYE_INDICES

DEFAULT_GAINS = {"nose": 1.0, "mouth": 0.8, "cheek": 1.2, "eye": 0.0}


class AxisSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    ON_AXIS = "on_axis"


def default_strength(lm: LandmarkSet) -> float:
    """One sixtieth of the jaw width (outermost cheek points)."""
    return distance(lm[0], lm[32]) / 60.0


@dataclass(frozen=True)
class ShrinkConfig:
    strength: Optional[float] = None  # pixels; None -> default_strength(lm)
    axis_epsilon: float = 1.0
    border_anchors: int = 4
    group_gains: dict = field(default_factory=lambda: dict(DEFAULT_GAINS))

    def __post_init__(self):
        if self.strength is not None and not (self.strength >= 0 and math.isfinite(self.strength)):
            raise ValueError(f"strength must be finite and >= 0, got {self.strength}")
        if not self.axis_epsilon >= 0:
            raise ValueError(f"axis_epsilon must be >= 0, got {self.axis_epsilon}")
        if int(self.border_anchors) != self.border_anchors or self.border_anchors < 0:
            raise ValueError(
                f"border_anchors must be a non-negative integer, got {self.border_anchors}"
            )
        gains = dict(DEFAULT_GAINS)
        gains.update(self.group_gains)
        if set(gains) != set(DEFAULT_GAINS) or any(g < 0 for g in gains.values()):
            raise ValueError(
                f"group_gains must map nose/mouth/cheek/eye to values >= 0, got {self.group_gains}"
            )
        object.__setattr__(self, "group_gains", gains)


@dataclass(frozen=True)
class ShrinkPlan:
    control_indices: tuple
    moving_vectors: np.ndarray  # (51, 2)
    anchors: np.ndarray  # (k, 2), zero displacement
    beta: float


def select_control_points(lm: LandmarkSet) -> tuple:
    """Indices of the 51 shrink controls.

    Nose (15), mouth (the outer ring and the inner top center, 13), the
    central jaw symmetric about the chin (21) and the two eye centers.
    """
    return CONTROL_INDICES


def group_of(index: int) -> str:
    if index in NOSE_INDICES:
        return "nose"
    if index in MOUTH_INDICES:
        return "mouth"
    if index in CHEEK_INDICES:
        return "cheek"
    if index in EYE_INDICES:
        return "eye"
    raise KeyError(f"landmark {index} is not a shrink control")


def side_of_axis(c: Point2, lm: LandmarkSet, axis_epsilon: float = 1.0) -> AxisSide:
    eye_axis_angle(lm.left_eye_center, lm.right_eye_center)  # rejects coincident eyes
    m = midpoint(lm.left_eye_center, lm.right_eye_center)
    ve = lm.right_eye_center - lm.left_eye_center
    s = (c - m).dot(ve) / ve.norm()
    if abs(s) <= axis_epsilon:
        return AxisSide.ON_AXIS
    return AxisSide.LEFT if s < 0 else AxisSide.RIGHT


def border_anchor_points(width: int, height: int, per_edge: int) -> np.ndarray:
    """The four corners plus ``per_edge`` evenly spaced points inside each edge."""
    if per_edge <= 0:
        return np.empty((0, 2))
    x1, y1 = float(width - 1), float(height - 1)
    pts = [(0.0, 0.0), (x1, 0.0), (x1, y1), (0.0, y1)]
    for k in range(1, per_edge + 1):
        t = k / (per_edge + 1)
        pts += [(t * x1, 0.0), (x1, t * y1), (t * x1, y1), (0.0, t * y1)]
    return np.array(pts)


def moving_vectors(
    lm: LandmarkSet, cfg: ShrinkConfig, width: Optional[int] = None, height: Optional[int] = None
) -> ShrinkPlan:
    """Moving vectors for the 51 controls and the border anchors.

    Left-side points move by ``l_i (cos b, sin b)`` and right-side points by
    the opposite, where ``b`` is the eye-axis tilt; points on the midline do
    not move. ``l_i`` is the strength times the gain of the point's group.
    Anchors need the image size, taken from the arguments or from ``lm``.
    """
    beta = eye_axis_angle(lm.left_eye_center, lm.right_eye_center)
    strength = default_strength(lm) if cfg.strength is None else cfg.strength
    direction = np.array([math.cos(beta), math.sin(beta)])
    indices = select_control_points(lm)
    vecs = np.zeros((len(indices), 2))
    for k, idx in enumerate(indices):
        side = side_of_axis(lm[idx], lm, cfg.axis_epsilon)
        if side is AxisSide.ON_AXIS:
            continue
        length = strength * cfg.group_gains[group_of(idx)]
        vecs[k] = length * direction if side is AxisSide.LEFT else -length * direction

    width = lm.width if width is None else width
    height = lm.height if height is None else height
    if cfg.border_anchors and (width is None or height is None):
        raise ValueError("border anchors need the image size")
    anchors = border_anchor_points(width or 0, height or 0, cfg.border_anchors)
    return ShrinkPlan(indices, vecs, anchors, beta)


def plan_to_control_pairs(lm: LandmarkSet, plan: ShrinkPlan) -> ControlPairSet:
    """Sources are the control landmarks then the anchors; targets add the moving vectors.

    Anchors that coincide with a landmark (or another anchor) are dropped.
    """
    sources = [lm.points[i] for i in plan.control_indices]
    targets = [lm.points[i] + v for i, v in zip(plan.control_indices, plan.moving_vectors)]
    seen = {tuple(p) for p in sources}
    dropped = 0
    for a in plan.anchors:
        key = (float(a[0]), float(a[1]))
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        sources.append(np.array(a))
        targets.append(np.array(a))
    if dropped:
        log.warning("dropped %d border anchor(s) coinciding with other control points", dropped)
    if not sources:
        raise DegenerateConfigurationError("shrink plan has no control pairs")
    return ControlPairSet(np.array(sources), np.array(targets))


def shrink_control_pairs(
    lm: LandmarkSet, cfg: ShrinkConfig, width: Optional[int] = None, height: Optional[int] = None
) -> ControlPairSet:
    return plan_to_control_pairs(lm, moving_vectors(lm, cfg, width, height))
