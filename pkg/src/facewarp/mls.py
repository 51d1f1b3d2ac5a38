"""Moving Least Squares deformation with point handles.

For every evaluation point ``v`` the control sources ``p_i`` are weighted by
``w_i = 1 / |p_i - v| ** (2 * alpha)`` and the best affine, similarity or
rigid transform taking the ``p_i`` to the targets ``q_i`` under those
weights is applied to ``v``. Points are row vectors throughout.

The vectorized evaluator accumulates over control points one at a time with
purely elementwise arithmetic, so a point evaluated alone and the same point
evaluated inside a large batch produce bit-identical results.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateConfigurationError, DegenerateRigidWarning
from .geometry import Point2
from .imaging import BackwardMap, warp_backward

#: Largest acceptable condition number of the affine moment matrix.
AFFINE_CONDITION_LIMIT = 1e12

#: Pixels closer than this many grid spacings to a control target are
#: evaluated exactly; the MLS field has a kink at every handle that a coarse
#: bilinear grid cannot follow.
REFINE_RADIUS = 2.0


class Method(enum.Enum):
    AFFINE = "affine"
    SIMILARITY = "similarity"
    RIGID = "rigid"


@dataclass(frozen=True)
class ControlPairSet:
    """Control sources ``p_i`` and their deformed positions ``q_i``, both ``(n, 2)``."""

    sources: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        p = np.array(self.sources, dtype=np.float64).reshape(-1, 2)
        q = np.array(self.targets, dtype=np.float64).reshape(-1, 2)
        if p.shape != q.shape:
            raise ValueError(f"{len(p)} sources but {len(q)} targets")
        if len(p) == 0:
            raise ValueError("at least one control pair is required")
        if not (np.isfinite(p).all() and np.isfinite(q).all()):
            raise ValueError("control points must be finite")
        if len(np.unique(p, axis=0)) != len(p):
            raise DegenerateConfigurationError("control sources must be pairwise distinct")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "sources", p)
        object.__setattr__(self, "targets", q)

    def __len__(self) -> int:
        return len(self.sources)

    def swapped(self) -> ControlPairSet:
        """The same pairs with sources and targets exchanged."""
        if len(np.unique(self.targets, axis=0)) != len(self.targets):
            raise DegenerateConfigurationError(
                "control targets coincide; the backward map is undefined"
            )
        return ControlPairSet(self.targets, self.sources)


@dataclass(frozen=True)
class MlsParams:
    alpha: float = 1.0
    method: Method = Method.RIGID
    grid_spacing: int = 4
    snap_epsilon: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if int(self.grid_spacing) != self.grid_spacing or self.grid_spacing < 1:
            raise ValueError(f"grid_spacing must be an integer >= 1, got {self.grid_spacing}")
        if not self.snap_epsilon > 0:
            raise ValueError(f"snap_epsilon must be positive, got {self.snap_epsilon}")


@dataclass(frozen=True)
class Snap:
    """``v`` lies within ``snap_epsilon`` of control source ``index``."""

    index: int


@dataclass(frozen=True)
class MlsLocal:
    weights: np.ndarray
    p_star: Point2
    q_star: Point2
    p_hat: np.ndarray
    q_hat: np.ndarray


def weights(v, sources, alpha: float, snap_epsilon: float = 1e-6) -> Union[np.ndarray, Snap]:
    v = np.asarray(v, dtype=np.float64)
    src = np.asarray(sources, dtype=np.float64).reshape(-1, 2)
    d2 = (src[:, 0] - v[0]) ** 2 + (src[:, 1] - v[1]) ** 2
    hits = np.flatnonzero(d2 < snap_epsilon**2)
    if hits.size:
        return Snap(int(hits[0]))
    return np.power(d2, -alpha)


def local_frame(v, cps: ControlPairSet, alpha: float, snap_epsilon: float = 1e-6) -> MlsLocal:
    """Weights, weighted centroids and centered control points at ``v``."""
    w = weights(v, cps.sources, alpha, snap_epsilon)
    if isinstance(w, Snap):
        raise ValueError(f"v coincides with control source {w.index}; no local frame")
    total = w.sum()
    p_star = (w[:, None] * cps.sources).sum(axis=0) / total
    q_star = (w[:, None] * cps.targets).sum(axis=0) / total
    return MlsLocal(
        weights=w,
        p_star=Point2(*p_star),
        q_star=Point2(*q_star),
        p_hat=cps.sources - p_star,
        q_hat=cps.targets - q_star,
    )


# --------------------------------------------------------------------------
# vectorized evaluation


def _evaluate(method: Method, vx, vy, src, dst, alpha, snap_epsilon):
    n = len(src)
    if n == 1:
        return vx + (dst[0, 0] - src[0, 0]), vy + (dst[0, 1] - src[0, 1])

    eps2 = snap_epsilon * snap_epsilon
    snap = np.full(vx.shape, -1, dtype=np.intp)
    w = []
    wsum = np.zeros_like(vx)
    px_acc = np.zeros_like(vx)
    py_acc = np.zeros_like(vx)
    qx_acc = np.zeros_like(vx)
    qy_acc = np.zeros_like(vx)
    for i in range(n):
        d2 = (src[i, 0] - vx) ** 2 + (src[i, 1] - vy) ** 2
        hit = d2 < eps2
        if hit.any():
            snap[hit & (snap < 0)] = i
            d2 = np.where(hit, 1.0, d2)
        wi = np.power(d2, -alpha)
        w.append(wi)
        wsum += wi
        px_acc += wi * src[i, 0]
        py_acc += wi * src[i, 1]
        qx_acc += wi * dst[i, 0]
        qy_acc += wi * dst[i, 1]
    psx, psy = px_acc / wsum, py_acc / wsum
    qsx, qsy = qx_acc / wsum, qy_acc / wsum
    dx, dy = vx - psx, vy - psy
    live = snap < 0

    if method is Method.AFFINE:
        m11 = np.zeros_like(vx)
        m12 = np.zeros_like(vx)
        m22 = np.zeros_like(vx)
        b11 = np.zeros_like(vx)
        b12 = np.zeros_like(vx)
        b21 = np.zeros_like(vx)
        b22 = np.zeros_like(vx)
        for i in range(n):
            phx, phy = src[i, 0] - psx, src[i, 1] - psy
            qhx, qhy = dst[i, 0] - qsx, dst[i, 1] - qsy
            wpx, wpy = w[i] * phx, w[i] * phy
            m11 += wpx * phx
            m12 += wpx * phy
            m22 += wpy * phy
            b11 += wpx * qhx
            b12 += wpx * qhy
            b21 += wpy * qhx
            b22 += wpy * qhy
        half_tr = (m11 + m22) / 2.0
        root = np.sqrt(((m11 - m22) / 2.0) ** 2 + m12 * m12)
        lam_max, lam_min = half_tr + root, half_tr - root
        bad = live & ~(lam_min > lam_max / AFFINE_CONDITION_LIMIT)
        if bad.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                cond = float(np.max(lam_max[bad] / np.abs(lam_min[bad])))
            raise DegenerateConfigurationError(
                f"affine moment matrix is singular or ill-conditioned "
                f"(condition number {cond:.3g} > {AFFINE_CONDITION_LIMIT:.0e}) "
                f"at {int(bad.sum())} evaluation point(s); sources may be collinear"
            )
        with np.errstate(divide="ignore", invalid="ignore"):
            det = m11 * m22 - m12 * m12
            ux = (dx * m22 - dy * m12) / det
            uy = (dy * m11 - dx * m12) / det
        fx = ux * b11 + uy * b21 + qsx
        fy = ux * b12 + uy * b22 + qsy
    else:
        mu = np.zeros_like(vx)
        frx = np.zeros_like(vx)
        fry = np.zeros_like(vx)
        for i in range(n):
            phx, phy = src[i, 0] - psx, src[i, 1] - psy
            qhx, qhy = dst[i, 0] - qsx, dst[i, 1] - qsy
            mu += w[i] * (phx * phx + phy * phy)
            # A_i = w_i [p; -p_perp] [d; -d_perp]^T with (x, y)_perp = (-y, x)
            a11 = w[i] * (phx * dx + phy * dy)
            a12 = w[i] * (phx * dy - phy * dx)
            a21 = w[i] * (phy * dx - phx * dy)
            a22 = w[i] * (phy * dy + phx * dx)
            frx += qhx * a11 + qhy * a21
            fry += qhx * a12 + qhy * a22
        if method is Method.SIMILARITY:
            bad = live & ~(mu > 0)
            if bad.any():
                raise DegenerateConfigurationError(
                    "similarity normalizer vanishes: all control sources coincide with their centroid"
                )
            with np.errstate(divide="ignore", invalid="ignore"):
                fx = frx / mu + qsx
                fy = fry / mu + qsy
        else:
            fnorm = np.hypot(frx, fry)
            dlen = np.hypot(dx, dy)
            # at v == p* the direction is irrelevant: f = q*
            zero = live & (fnorm == 0.0) & (dlen > 0.0)
            if zero.any():
                warnings.warn(
                    f"rigid MLS direction vanished at {int(zero.sum())} point(s); "
                    "using translation instead",
                    DegenerateRigidWarning,
                    stacklevel=3,
                )
                frx = np.where(zero, dx, frx)
                fry = np.where(zero, dy, fry)
                fnorm = np.where(zero, dlen, fnorm)
            with np.errstate(divide="ignore", invalid="ignore"):
                scale = np.where(dlen == 0.0, 0.0, dlen / fnorm)
            fx = frx * scale + qsx
            fy = fry * scale + qsy

    if not live.all():
        fx = np.where(live, fx, dst[snap, 0])
        fy = np.where(live, fy, dst[snap, 1])
    return fx, fy


def evaluate(
    method: Method,
    points,
    cps: ControlPairSet,
    alpha: float = 1.0,
    snap_epsilon: float = 1e-6,
    threads: int = 1,
    chunk_size: int = 65536,
) -> np.ndarray:
    """Apply the MLS deformation ``f`` to an ``(N, 2)`` array of points."""
    method = Method(method)
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    out = np.empty_like(pts)
    if len(pts) == 0:
        return out

    def work(sl: slice) -> None:
        fx, fy = _evaluate(
            method,
            np.ascontiguousarray(pts[sl, 0]),
            np.ascontiguousarray(pts[sl, 1]),
            cps.sources,
            cps.targets,
            alpha,
            snap_epsilon,
        )
        out[sl, 0] = fx
        out[sl, 1] = fy

    slices = [slice(a, min(a + chunk_size, len(pts))) for a in range(0, len(pts), chunk_size)]
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, slices))
    else:
        for sl in slices:
            work(sl)
    return out


def _map_point(method, v, cps, alpha, snap_epsilon) -> Point2:
    x, y = evaluate(method, np.array([v], dtype=np.float64), cps, alpha, snap_epsilon)[0]
    return Point2(float(x), float(y))


def map_affine(v, cps: ControlPairSet, alpha: float = 1.0, snap_epsilon: float = 1e-6) -> Point2:
    """Affine MLS: ``(v - p*) M^-1 B + q*``.

    ``M = sum w_i p_hat_i^T p_hat_i`` and ``B = sum w_j p_hat_j^T q_hat_j``.
    Raises :class:`DegenerateConfigurationError` when ``M`` is ill-conditioned.
    """
    return _map_point(Method.AFFINE, v, cps, alpha, snap_epsilon)


def map_similarity(
    v, cps: ControlPairSet, alpha: float = 1.0, snap_epsilon: float = 1e-6
) -> Point2:
    """Similarity MLS: ``sum q_hat_i A_i / mu_s + q*``."""
    return _map_point(Method.SIMILARITY, v, cps, alpha, snap_epsilon)


def map_rigid(v, cps: ControlPairSet, alpha: float = 1.0, snap_epsilon: float = 1e-6) -> Point2:
    """Rigid MLS: the similarity direction rescaled to length ``|v - p*|``.

    If the direction vector vanishes, ``v - p* + q*`` is returned and a
    :class:`DegenerateRigidWarning` is emitted.
    """
    return _map_point(Method.RIGID, v, cps, alpha, snap_epsilon)


MAPPERS = {Method.AFFINE: map_affine, Method.SIMILARITY: map_similarity, Method.RIGID: map_rigid}


# --------------------------------------------------------------------------
# image warping


def _grid_axis(length: int, spacing: int) -> np.ndarray:
    ticks = np.arange(0, length, spacing, dtype=np.float64)
    if ticks[-1] != length - 1:
        ticks = np.append(ticks, float(length - 1))
    return ticks


def _axis_weights(ticks: np.ndarray, length: int):
    coords = np.arange(length, dtype=np.float64)
    if len(ticks) == 1:
        return np.zeros(length, dtype=np.intp), np.zeros(length)
    j = np.clip(np.searchsorted(ticks, coords, side="right") - 1, 0, len(ticks) - 2)
    t = (coords - ticks[j]) / (ticks[j + 1] - ticks[j])
    return j, t


def build_backward_warp(
    cps: ControlPairSet, params: MlsParams, width: int, height: int, threads: int = 1
) -> BackwardMap:
    """Backward map for warping an image so that content at ``p_i`` lands on ``q_i``.

    The MLS map is evaluated with sources and targets exchanged, so each
    output pixel (in target space) finds the source position it reads. With
    ``grid_spacing > 1`` the map is computed exactly on a vertex lattice
    (always including the last row and column) and bilinearly interpolated
    in between, except within ``REFINE_RADIUS * grid_spacing`` pixels of a
    control target where the map is evaluated exactly.
    """
    inverse = cps.swapped()
    s = int(params.grid_spacing)
    gx, gy = _grid_axis(width, s), _grid_axis(height, s)
    vy, vx = np.meshgrid(gy, gx, indexing="ij")
    mapped = evaluate(
        params.method,
        np.column_stack([vx.ravel(), vy.ravel()]),
        inverse,
        params.alpha,
        params.snap_epsilon,
        threads=threads,
    )
    fx = mapped[:, 0].reshape(vx.shape)
    fy = mapped[:, 1].reshape(vx.shape)
    if s == 1:
        return BackwardMap(fx, fy)

    jx, tx = _axis_weights(gx, width)
    jy, ty = _axis_weights(gy, height)
    jx1 = np.minimum(jx + 1, len(gx) - 1)
    jy1 = np.minimum(jy + 1, len(gy) - 1)
    tx, ty = tx[None, :], ty[:, None]

    def interp(f):
        top = f[jy][:, jx] * (1.0 - tx) + f[jy][:, jx1] * tx
        bottom = f[jy1][:, jx] * (1.0 - tx) + f[jy1][:, jx1] * tx
        return top * (1.0 - ty) + bottom * ty

    map_x, map_y = interp(fx), interp(fy)
    rows, cols = _near_controls(inverse.sources, REFINE_RADIUS * s, width, height)
    if rows.size:
        exact = evaluate(
            params.method,
            np.column_stack([cols, rows]).astype(np.float64),
            inverse,
            params.alpha,
            params.snap_epsilon,
            threads=threads,
        )
        map_x[rows, cols] = exact[:, 0]
        map_y[rows, cols] = exact[:, 1]
    return BackwardMap(map_x, map_y)


def _near_controls(points: np.ndarray, radius: float, width: int, height: int):
    mask = np.zeros((height, width), dtype=bool)
    for x, y in points:
        c0, c1 = max(int(math.floor(x - radius)), 0), min(int(math.ceil(x + radius)), width - 1)
        r0, r1 = max(int(math.floor(y - radius)), 0), min(int(math.ceil(y + radius)), height - 1)
        if c0 > c1 or r0 > r1:
            continue
        yy, xx = np.mgrid[r0 : r1 + 1, c0 : c1 + 1]
        mask[r0 : r1 + 1, c0 : c1 + 1] |= (xx - x) ** 2 + (yy - y) ** 2 <= radius * radius
    return np.nonzero(mask)


def deform_image(
    img: np.ndarray, cps: ControlPairSet, params: MlsParams, threads: int = 1
) -> np.ndarray:
    h, w = img.shape[:2]
    return warp_backward(img, build_backward_warp(cps, params, w, h, threads), threads=threads)
