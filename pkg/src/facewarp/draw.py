"""Deterministic test images: a cartoon face drawn from landmarks over a grid."""

from __future__ import annotations

import numpy as np

from .landmarks import GROUP_RANGES, GroupId, LandmarkSet


def grid_pattern(width: int, height: int, spacing: int = 16) -> np.ndarray:
    """Smooth color ramps crossed by dark grid lines, so warps are easy to see."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    img = np.empty((height, width, 3))
    img[..., 0] = 70 + 150 * xs / max(width - 1, 1)
    img[..., 1] = 70 + 150 * ys / max(height - 1, 1)
    img[..., 2] = 160
    lines = (xs.astype(int) % spacing == 0) | (ys.astype(int) % spacing == 0)
    img[lines] *= 0.45
    return np.round(img).astype(np.uint8)


def _disk(img, cx, cy, r, color):
    h, w = img.shape[:2]
    y0, y1 = max(int(cy - r - 1), 0), min(int(cy + r + 2), h)
    x0, x1 = max(int(cx - r - 1), 0), min(int(cx + r + 2), w)
    if y0 >= y1 or x0 >= x1:
        return
    yy, xx = np.mgrid[y0:y1, x0:x1]
    inside = (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    img[y0:y1, x0:x1][inside] = color


def render_face(lm: LandmarkSet, width: int, height: int) -> np.ndarray:
    """Draw a cartoon face: grid background, filled eyes, and dots at every landmark."""
    img = grid_pattern(width, height)
    unit = min(width, height)
    for center, outline in ((GroupId.LEFT_EYE_CENTER, GroupId.LEFT_EYE),
                            (GroupId.RIGHT_EYE_CENTER, GroupId.RIGHT_EYE)):  # fmt: skip
        cx, cy = lm.points[GROUP_RANGES[center][0]]
        pts = lm.points[list(GROUP_RANGES[outline])]
        r = np.max(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)) * 0.45
        _disk(img, cx, cy, r * 1.6, (245, 245, 240))
        _disk(img, cx, cy, r, (60, 40, 20))
    dot = max(1.5, unit / 200)
    colors = {
        GroupId.CHEEK: (200, 60, 60),
        GroupId.NOSE: (40, 120, 40),
        GroupId.MOUTH_OUTER: (180, 30, 90),
        GroupId.MOUTH_INNER: (120, 20, 60),
        GroupId.LEFT_EYEBROW: (50, 50, 50),
        GroupId.RIGHT_EYEBROW: (50, 50, 50),
    }
    for group, color in colors.items():
        for i in GROUP_RANGES[group]:
            _disk(img, lm.points[i, 0], lm.points[i, 1], dot, color)
    return img
