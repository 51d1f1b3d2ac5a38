"""The 106-point facial landmark schema.

Index layout (all ranges inclusive, image-left is "left"):

======  =========================  ==========================================
range   group                      ordering
======  =========================  ==========================================
0-32    cheek contour              left jaw -> chin (16) -> right jaw
33-41   left eyebrow               outer end -> inner end
42-50   right eyebrow              outer end -> inner end
51-58   left eye outline           51 outer canthus, 52-54 upper lid,
                                   55 inner canthus, 56-58 lower lid
59      left eye center
60-67   right eye outline          mirror of 51-58 (60 outer, 64 inner)
68      right eye center
69-83   nose                       69-73 bridge top -> tip, 74-78 left wing,
                                   79-83 right wing
84-95   mouth outer ring           84 left corner, 85-89 upper lip (87 top
                                   center), 90 right corner, 91-95 lower lip
                                   right -> left (93 bottom center)
96-105  mouth inner                96-100 upper inner lip left -> right
                                   (98 top center), 101-105 lower inner lip
                                   left -> right (103 bottom center)
======  =========================  ==========================================
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DegenerateGeometryError, LandmarkFormatError
from .geometry import Point2, distance

N_LANDMARKS = 106
SCHEMA_VERSION = 1


class GroupId(enum.Enum):
    CHEEK = "cheek"
    LEFT_EYEBROW = "left_eyebrow"
    RIGHT_EYEBROW = "right_eyebrow"
    LEFT_EYE = "left_eye"
    RIGHT_EYE = "right_eye"
    LEFT_EYE_CENTER = "left_eye_center"
    RIGHT_EYE_CENTER = "right_eye_center"
    NOSE = "nose"
    MOUTH_OUTER = "mouth_outer"
    MOUTH_INNER = "mouth_inner"


GROUP_RANGES: dict[GroupId, range] = {
    GroupId.CHEEK: range(0, 33),
    GroupId.LEFT_EYEBROW: range(33, 42),
    GroupId.RIGHT_EYEBROW: range(42, 51),
    GroupId.LEFT_EYE: range(51, 59),
    GroupId.LEFT_EYE_CENTER: range(59, 60),
    GroupId.RIGHT_EYE: range(60, 68),
    GroupId.RIGHT_EYE_CENTER: range(68, 69),
    GroupId.NOSE: range(69, 84),
    GroupId.MOUTH_OUTER: range(84, 96),
    GroupId.MOUTH_INNER: range(96, 106),
}

CHIN = 16
LEFT_EYE_CENTER = 59
RIGHT_EYE_CENTER = 68
LEFT_EYE_OUTER = 51
LEFT_EYE_INNER = 55
RIGHT_EYE_OUTER = 60
RIGHT_EYE_INNER = 64
MOUTH_INNER_TOP_CENTER = 98


def _mirror_permutation() -> np.ndarray:
    perm = np.arange(N_LANDMARKS)
    pairs = [(i, 32 - i) for i in range(33)]
    pairs += [(33 + k, 42 + k) for k in range(9)]
    pairs += [(51 + k, 60 + k) for k in range(9)]  # outlines and centers
    pairs += [(74 + k, 79 + k) for k in range(5)]
    pairs += [(84, 90), (85, 89), (86, 88), (91, 95), (92, 94)]
    pairs += [(96, 100), (97, 99), (101, 105), (102, 104)]
    for a, b in pairs:
        perm[a], perm[b] = b, a
    return perm


#: ``MIRROR[i]`` is the index of the landmark that plays i's role on the
#: other side of the face. Bridge and center-line points map to themselves.
MIRROR = _mirror_permutation()


@dataclass(frozen=True)
class LandmarkSet:
    """An immutable, validated set of 106 landmark positions in pixels."""

    points: np.ndarray
    schema_version: int = SCHEMA_VERSION
    width: Optional[int] = None
    height: Optional[int] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.shape != (N_LANDMARKS, 2):
            raise LandmarkFormatError(
                f"expected {N_LANDMARKS} points of shape (106, 2), got shape {pts.shape}"
            )
        bad = np.flatnonzero(~np.isfinite(pts).all(axis=1))
        if bad.size:
            raise LandmarkFormatError(f"non-finite coordinate at index {int(bad[0])}")
        if self.schema_version != SCHEMA_VERSION:
            raise LandmarkFormatError(
                f"unsupported schema_version {self.schema_version!r} (supported: {SCHEMA_VERSION})"
            )
        if np.array_equal(pts[LEFT_EYE_CENTER], pts[RIGHT_EYE_CENTER]):
            raise DegenerateGeometryError("left and right eye centers coincide")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __getitem__(self, index: int) -> Point2:
        x, y = self.points[index]
        return Point2(float(x), float(y))

    def __len__(self) -> int:
        return N_LANDMARKS

    def __eq__(self, other):
        if not isinstance(other, LandmarkSet):
            return NotImplemented
        return (
            np.array_equal(self.points, other.points)
            and self.schema_version == other.schema_version
            and self.width == other.width
            and self.height == other.height
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def left_eye_center(self) -> Point2:
        return self[LEFT_EYE_CENTER]

    @property
    def right_eye_center(self) -> Point2:
        return self[RIGHT_EYE_CENTER]

    def with_points(self, points) -> LandmarkSet:
        return LandmarkSet(points, self.schema_version, self.width, self.height)


def select_group(lm: LandmarkSet, group: GroupId) -> list[tuple[int, Point2]]:
    """Return ``(index, point)`` pairs of one group in ascending index order."""
    return [(i, lm[i]) for i in GROUP_RANGES[group]]


# --------------------------------------------------------------------------
# JSON I/O


def _coordinate(value, index: int, axis: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise LandmarkFormatError(f"point {index}: {axis} is not a number ({value!r})")
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            raise LandmarkFormatError(
                f"point {index}: {axis} is not a number ({value!r})"
            ) from None
        if math.isfinite(value):
            raise LandmarkFormatError(f"point {index}: {axis} must be a JSON number, not a string")
    value = float(value)
    if not math.isfinite(value):
        raise LandmarkFormatError(f"non-finite coordinate at index {index} ({axis}={value})")
    return value


def parse_landmarks(data: Union[bytes, str]) -> LandmarkSet:
    """Parse and validate a landmark JSON document.

    The expected layout is::

        {"schema_version": 1, "width": W, "height": H,
         "points": [[x0, y0], ..., [x105, y105]]}

    ``width`` and ``height`` are optional.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LandmarkFormatError(f"landmark file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise LandmarkFormatError(
            f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise LandmarkFormatError("top-level JSON value must be an object")

    version = doc.get("schema_version")
    if version is None:
        raise LandmarkFormatError("missing schema_version")
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise LandmarkFormatError(
            f"unsupported schema_version {version!r} (supported: {SCHEMA_VERSION})"
        )

    raw = doc.get("points")
    if not isinstance(raw, list):
        raise LandmarkFormatError("'points' must be a list of [x, y] pairs")
    if len(raw) != N_LANDMARKS:
        raise LandmarkFormatError(f"expected {N_LANDMARKS} points, got {len(raw)}")

    pts = np.empty((N_LANDMARKS, 2))
    for i, item in enumerate(raw):
        if not isinstance(item, list) or len(item) != 2:
            raise LandmarkFormatError(f"point {i} must be a two-element array, got {item!r}")
        pts[i, 0] = _coordinate(item[0], i, "x")
        pts[i, 1] = _coordinate(item[1], i, "y")

    dims = {}
    for key in ("width", "height"):
        value = doc.get(key)
        if value is None:
            dims[key] = None
        elif isinstance(value, int) and not isinstance(value, bool) and value >= 1:
            dims[key] = value
        else:
            raise LandmarkFormatError(f"'{key}' must be a positive integer, got {value!r}")

    return LandmarkSet(pts, version, dims["width"], dims["height"])


def serialize_landmarks(lm: LandmarkSet) -> bytes:
    doc: dict = {"schema_version": lm.schema_version}
    if lm.width is not None:
        doc["width"] = lm.width
    if lm.height is not None:
        doc["height"] = lm.height
    doc["points"] = [[float(x), float(y)] for x, y in lm.points]
    return json.dumps(doc).encode("utf-8")


def load_landmarks(path) -> LandmarkSet:
    with open(path, "rb") as fh:
        return parse_landmarks(fh.read())


def save_landmarks(lm: LandmarkSet, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_landmarks(lm))


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # "out_of_bounds" | "degenerate_eye"
    index: int
    message: str


def validate_against_image(lm: LandmarkSet, width: int, height: int) -> list[ValidationIssue]:
    """List every problem that would break a warp of a ``width`` x ``height`` image.

    An empty list means the landmarks are usable. Reported problems are
    points outside ``[0, width) x [0, height)`` and eyes whose center
    coincides with the inner canthus (zero deformation radius).
    """
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    issues = []
    for i, (x, y) in enumerate(lm.points):
        if not (0.0 <= x < width and 0.0 <= y < height):
            issues.append(
                ValidationIssue(
                    "out_of_bounds", i, f"point {i} at ({x:g}, {y:g}) outside {width}x{height}"
                )
            )
    for center, inner, side in (
        (LEFT_EYE_CENTER, LEFT_EYE_INNER, "left"),
        (RIGHT_EYE_CENTER, RIGHT_EYE_INNER, "right"),
    ):
        if distance(lm[center], lm[inner]) == 0.0:
            issues.append(
                ValidationIssue(
                    "degenerate_eye",
                    center,
                    f"{side} eye center coincides with its inner canthus (zero radius)",
                )
            )
    return issues


# --------------------------------------------------------------------------
# synthetic fixture

#: Offset of the eye-center landmark from the canthus midpoint, as a fraction
#: of ``min(width, height)``, in the untilted face frame (negative = upward).
PUPIL_OFFSET = (0.0, -0.012)


def _ellipse(cx, cy, rx, ry, thetas):
    thetas = np.asarray(thetas, dtype=np.float64)
    return np.column_stack([cx + rx * np.cos(thetas), cy + ry * np.sin(thetas)])


def _mirror_x(pts):
    out = np.array(pts, dtype=np.float64)
    out[:, 0] = -out[:, 0]
    return out


def _canonical_face() -> np.ndarray:
    """Landmarks of a frontal face in units of the image's short side, origin at its center."""
    pts = np.zeros((N_LANDMARKS, 2))

    jaw_t = np.pi - np.pi * np.arange(33) / 32.0
    pts[0:33] = _ellipse(0.0, -0.05, 0.36, 0.40, jaw_t)

    brow_x = np.linspace(-0.27, -0.06, 9)
    brow_y = -0.20 - 0.035 * np.sin(np.pi * (brow_x + 0.27) / 0.21)
    pts[33:42] = np.column_stack([brow_x, brow_y])
    pts[42:51] = _mirror_x(pts[33:42])

    canthus_mid = np.array([-0.15, -0.108])
    eye_t = np.pi + np.pi / 4.0 * np.arange(8)
    pts[51:59] = _ellipse(canthus_mid[0], canthus_mid[1], 0.07, 0.03, eye_t)
    pts[59] = canthus_mid + np.array(PUPIL_OFFSET)
    pts[60:69] = _mirror_x(pts[51:60])

    pts[69:74] = np.column_stack([np.zeros(5), np.linspace(-0.10, 0.06, 5)])
    wing_t = np.linspace(np.pi * 0.55, np.pi * 1.25, 5)
    pts[74:79] = _ellipse(-0.03, 0.05, 0.035, 0.03, wing_t)
    pts[79:84] = _mirror_x(pts[74:79])

    mouth_c = (0.0, 0.18)
    outer_t = np.concatenate([np.pi + np.pi / 6.0 * np.arange(7), np.pi / 6.0 * np.arange(1, 6)])
    pts[84:96] = _ellipse(mouth_c[0], mouth_c[1], 0.11, 0.05, outer_t)

    upper_x = np.linspace(-0.07, 0.07, 5)
    pts[96:101] = np.column_stack([upper_x, 0.18 - 0.012 * (1.0 - (upper_x / 0.07) ** 2)])
    lower_x = np.linspace(-0.065, 0.065, 5)
    pts[101:106] = np.column_stack([lower_x, 0.18 + 0.015 * (1.0 - (lower_x / 0.07) ** 2) + 0.002])
    return pts


def synthetic_face(width: int, height: int, tilt: float = 0.0) -> LandmarkSet:
    """Deterministic stylized face centered in a ``width`` x ``height`` image.

    The layout is scaled by the short image side and rotated by ``tilt``
    radians about the image center, so the eye-center axis makes angle
    ``tilt`` with the horizontal. The eye-center landmarks sit
    ``PUPIL_OFFSET`` (times the short side, rotated with the face) away
    from the midpoint of the canthi.
    """
    if width < 64 or height < 64:
        raise ValueError("synthetic_face needs an image of at least 64x64")
    unit = float(min(width, height))
    cx, cy = (width - 1) / 2.0, (height - 1) / 2.0
    c, s = math.cos(tilt), math.sin(tilt)
    rot = np.array([[c, -s], [s, c]])
    pts = (_canonical_face() * unit) @ rot.T + np.array([cx, cy])
    return LandmarkSet(pts, SCHEMA_VERSION, width, height)


def pupil_offset(width: int, height: int, tilt: float = 0.0) -> tuple[float, float]:
    """The vector from canthus midpoint to eye-center landmark in :func:`synthetic_face`."""
    unit = float(min(width, height))
    ox, oy = PUPIL_OFFSET[0] * unit, PUPIL_OFFSET[1] * unit
    c, s = math.cos(tilt), math.sin(tilt)
    return (c * ox - s * oy, s * ox + c * oy)
