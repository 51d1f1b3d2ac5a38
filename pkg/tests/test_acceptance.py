"""Exit criteria. Run alone with ``pytest tests/test_acceptance.py``; a
PASS/FAIL line per criterion is printed in the terminal summary."""

import math
import time

import numpy as np
import pytest
from oracles import affine_oracle, random_instance, rigid_oracle, sample_points
from scipy.spatial import Delaunay

from facewarp.bench import bench
from facewarp.draw import render_face
from facewarp.expansion import (
    CenterScheme,
    EyeGeometry,
    ExpansionParams,
    Side,
    expand_eyes,
    expansion_scale,
    eye_geometry,
)
from facewarp.geometry import Point2
from facewarp.landmarks import MIRROR, synthetic_face
from facewarp.mls import (
    MAPPERS,
    ControlPairSet,
    Method,
    MlsParams,
    build_backward_warp,
    deform_image,
    evaluate,
    local_frame,
    map_affine,
    map_rigid,
    map_similarity,
)
from facewarp.shrink import (
    CHEEK_INDICES,
    MOUTH_INDICES,
    NOSE_INDICES,
    AxisSide,
    ShrinkConfig,
    moving_vectors,
    plan_to_control_pairs,
    select_control_points,
    shrink_control_pairs,
    side_of_axis,
)

SEED = 1234


def rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])  # row-vector rotation by +theta


@pytest.fixture(scope="module")
def fixture512():
    lm = synthetic_face(512, 512, 0.0)
    img = render_face(lm, 512, 512)
    cps = shrink_control_pairs(lm, ShrinkConfig(), 512, 512)
    return lm, img, cps


# 1 ---------------------------------------------------------------------------


@pytest.mark.acceptance(1, "MLS identity suite (q = p), 1e-9 px, bit-exact images, < 10 s")
def test_c1_identity_suite():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    img = rng.integers(0, 256, size=(48, 64, 3), dtype=np.uint8)
    worst = 0.0
    for k in range(50):
        n = (1, 3, 5, 10)[k % 4]
        p, _ = random_instance(rng, n, spread=24.0)
        p = p + [32.0, 24.0]
        cps = ControlPairSet(p, p)
        vs = rng.uniform(-20, 80, size=(200, 2))
        for method in Method:
            got = np.array([MAPPERS[method](v, cps) for v in vs])
            worst = max(worst, float(np.abs(got - vs).max()))
            assert np.array_equal(deform_image(img, cps, MlsParams(method=method)), img)
    elapsed = time.perf_counter() - start
    print(f"max |f(v) - v| = {worst:.2e} px, {elapsed:.2f} s")
    assert worst <= 1e-9
    assert elapsed < 10.0


# 2 ---------------------------------------------------------------------------


@pytest.mark.acceptance(2, "affine MLS equals weighted normal equations, 1e-6 px")
def test_c2_affine_oracle():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for k in range(50):
        n = 3 + k % 8
        p, q = random_instance(rng, n)
        cps = ControlPairSet(p, q)
        alpha = (0.5, 1.0, 2.0)[k % 3]
        for v in sample_points(rng, p, 100):
            err = np.abs(np.array(map_affine(v, cps, alpha)) - affine_oracle(v, p, q, alpha)).max()
            worst = max(worst, err)
    print(f"max deviation {worst:.2e} px")
    assert worst <= 1e-6


# 3 ---------------------------------------------------------------------------


@pytest.mark.acceptance(3, "similarity/rigid reproduce global transforms, rigid isometry")
def test_c3_similarity_reproduction():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(20):
        p, _ = random_instance(rng, int(rng.integers(3, 11)))
        m = rng.uniform(0.5, 2.0) * rot(rng.uniform(-math.pi, math.pi))
        t = rng.uniform(-50, 50, size=2)
        cps = ControlPairSet(p, p @ m + t)
        for v in sample_points(rng, p, 50):
            worst = max(worst, np.abs(np.array(map_similarity(v, cps)) - (v @ m + t)).max())
    print(f"similarity max deviation {worst:.2e} px")
    assert worst <= 1e-6


@pytest.mark.acceptance(3, "similarity/rigid reproduce global transforms, rigid isometry")
def test_c3_rigid_reproduction_and_isometry():
    rng = np.random.default_rng(SEED + 33)
    worst, worst_iso = 0.0, 0.0
    for _ in range(20):
        p, _ = random_instance(rng, int(rng.integers(2, 11)))
        m = rot(rng.uniform(-math.pi, math.pi))
        t = rng.uniform(-50, 50, size=2)
        rigid = ControlPairSet(p, p @ m + t)
        arbitrary = ControlPairSet(p, p + rng.normal(scale=15, size=p.shape))
        for v in sample_points(rng, p, 50):
            worst = max(worst, np.abs(np.array(map_rigid(v, rigid)) - (v @ m + t)).max())
            for cps in (rigid, arbitrary):
                frame = local_frame(v, cps, 1.0)
                iso = abs(math.dist(map_rigid(v, cps), frame.q_star) - math.dist(v, frame.p_star))
                worst_iso = max(worst_iso, iso)
    print(f"rigid max deviation {worst:.2e} px, isometry defect {worst_iso:.2e}")
    assert worst <= 1e-6
    assert worst_iso <= 1e-9


# 4 ---------------------------------------------------------------------------


@pytest.mark.acceptance(4, "rigid MLS equals rotation grid-search minimizer, 1e-4 px")
def test_c4_rigid_oracle():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for k in range(20):
        p, q = random_instance(rng, 3 + k % 8)
        cps = ControlPairSet(p, q)
        for v in sample_points(rng, p, 5):
            worst = max(worst, np.abs(np.array(map_rigid(v, cps)) - rigid_oracle(v, p, q, 1.0)).max())
    print(f"max deviation {worst:.2e} px")
    assert worst <= 1e-4


# 5 ---------------------------------------------------------------------------


@pytest.mark.acceptance(5, "eye expansion: a = 0 identity, a = +-50 local to circles, S spot values")
def test_c5_expansion(fixture512):
    lm, img, _ = fixture512
    for scheme in CenterScheme:
        assert np.array_equal(expand_eyes(img, lm, ExpansionParams(0, scheme)), img)
        ys, xs = np.mgrid[0:512, 0:512]
        outside = np.ones((512, 512), dtype=bool)
        for side in Side:
            geo = eye_geometry(lm, side, scheme)
            outside &= (xs - geo.center.x) ** 2 + (ys - geo.center.y) ** 2 >= geo.radius**2
        for a in (50, -50):
            out = expand_eyes(img, lm, ExpansionParams(a, scheme))
            assert np.array_equal(out[outside], img[outside])
            assert (out[~outside] != img[~outside]).any()
    geo = EyeGeometry(Point2(0.0, 0.0), Point2(20.0, 0.0), 20.0)
    assert expansion_scale(geo.center, geo, 50) == 0.5
    for a in (-50, 50, 80):
        rim = Point2(20.0 * math.cos(0.3) * (1 - 1e-15), 20.0 * math.sin(0.3) * (1 - 1e-15))
        assert expansion_scale(rim, geo, a) == pytest.approx(1.0, abs=1e-12)


# 6 ---------------------------------------------------------------------------


def _marker_centroid(img, center, radius=9):
    cx, cy = int(round(center[0])), int(round(center[1]))
    win = img[cy - radius : cy + radius + 1, cx - radius : cx + radius + 1, 0].astype(float)
    yy, xx = np.mgrid[cy - radius : cy + radius + 1, cx - radius : cx + radius + 1]
    return (xx * win).sum() / win.sum(), (yy * win).sum() / win.sum()


@pytest.mark.acceptance(6, "content at p_i lands at q_i within 1 px, all methods")
def test_c6_interpolation_markers():
    rng = np.random.default_rng(SEED + 6)
    size = 192
    p = np.array([[50.0, 48.0], [140.0, 55.0], [95.0, 100.0], [45.0, 145.0], [150.0, 140.0],
                  [96.0, 40.0]])  # fmt: skip
    q = p + rng.uniform(-6, 6, size=p.shape)
    corners = np.array([[0.0, 0.0], [size - 1, 0.0], [0.0, size - 1], [size - 1, size - 1]])
    cps = ControlPairSet(np.vstack([p, corners]), np.vstack([q, corners]))
    ys, xs = np.mgrid[0:size, 0:size]
    field = np.zeros((size, size))
    for x, y in p:
        field += np.exp(-((xs - x) ** 2 + (ys - y) ** 2) / (2 * 1.5**2))
    img = np.repeat(np.round(255 * field).astype(np.uint8)[..., None], 3, axis=2)
    worst = 0.0
    for method in Method:
        out = deform_image(img, cps, MlsParams(method=method))
        for qi in q:
            worst = max(worst, math.dist(_marker_centroid(out, qi), qi))
    print(f"max marker offset {worst:.3f} px")
    assert worst <= 1.0


# 7 ---------------------------------------------------------------------------


@pytest.mark.slow
@pytest.mark.acceptance(7, "timing order: affine fastest, |sim - rigid| / sim <= 0.15, < 60 s")
def test_c7_relative_timing(fixture512):
    lm, img, _ = fixture512
    start = time.perf_counter()
    report = bench(img, lm, ShrinkConfig(), MlsParams(grid_spacing=1), reps=5, threads=1)
    elapsed = time.perf_counter() - start
    t = report.times_s
    print(report.table())
    assert report.n_controls >= 51
    assert t["affine"] < t["similarity"] and t["affine"] < t["rigid"]
    assert abs(t["similarity"] - t["rigid"]) / t["similarity"] <= 0.15
    assert elapsed < 60.0


# 8 ---------------------------------------------------------------------------


@pytest.mark.acceptance(8, "mean face-region displacement strictly increases over alpha 0.1, 1, 5")
def test_c8_alpha_study(fixture512):
    lm, _, cps = fixture512
    hull = Delaunay(lm.points[list(select_control_points(lm))])
    ys, xs = np.mgrid[0:512, 0:512]
    face = (hull.find_simplex(np.column_stack([xs.ravel(), ys.ravel()])) >= 0).reshape(512, 512)
    means = []
    for alpha in (0.1, 1.0, 5.0):
        disp = build_backward_warp(cps, MlsParams(alpha=alpha, grid_spacing=1), 512, 512)
        means.append(float(np.hypot(*np.moveaxis(disp.displacement()[face], -1, 0)).mean()))
    print("mean displacement (px) for alpha 0.1, 1, 5:", [round(m, 4) for m in means])
    assert means[0] < means[1] < means[2]


# 9 ---------------------------------------------------------------------------


@pytest.mark.acceptance(9, "grid 1 == direct evaluation bit-exactly; grid 4 within 0.25 px")
def test_c9_grid_exact_small():
    lm = synthetic_face(64, 64, 0.2)
    cps = shrink_control_pairs(lm, ShrinkConfig(), 64, 64)
    inverse = cps.swapped()
    for method in Method:
        bmap = build_backward_warp(cps, MlsParams(method=method, grid_spacing=1), 64, 64)
        for r in range(0, 64, 2):
            for c in range(64):
                fx, fy = MAPPERS[method]((float(c), float(r)), inverse)
                assert bmap.map_x[r, c] == fx and bmap.map_y[r, c] == fy


@pytest.mark.acceptance(9, "grid 1 == direct evaluation bit-exactly; grid 4 within 0.25 px")
def test_c9_grid_fidelity_benchmark_fixture(fixture512):
    _, _, cps = fixture512
    inverse = cps.swapped()
    ys, xs = np.mgrid[0:512, 0:512]
    pixels = np.column_stack([xs.ravel(), ys.ravel()]).astype(float)
    rng = np.random.default_rng(SEED + 9)
    for method in Method:
        exact = build_backward_warp(cps, MlsParams(method=method, grid_spacing=1), 512, 512)
        direct = evaluate(method, pixels, inverse, 1.0, chunk_size=10007)
        assert np.array_equal(exact.map_x.ravel(), direct[:, 0])
        assert np.array_equal(exact.map_y.ravel(), direct[:, 1])
        for i in rng.choice(len(pixels), 300, replace=False):
            assert MAPPERS[method](pixels[i], inverse) == tuple(direct[i])
        coarse = build_backward_warp(cps, MlsParams(method=method, grid_spacing=4), 512, 512)
        dev = np.hypot(coarse.map_x - exact.map_x, coarse.map_y - exact.map_y).max()
        print(f"{method.value}: grid 4 max deviation {dev:.3f} px")
        assert dev <= 0.25


# 10 --------------------------------------------------------------------------


@pytest.mark.acceptance(10, "shrink plan: 51 controls (15/13/21), mirror symmetry, identity, tilt")
def test_c10_shrink_planner(fixture512):
    lm, img, _ = fixture512
    idx = select_control_points(lm)
    assert len(idx) == 51
    assert (len(NOSE_INDICES), len(MOUTH_INDICES), len(CHEEK_INDICES)) == (15, 13, 21)
    assert set(NOSE_INDICES) | set(MOUTH_INDICES) | set(CHEEK_INDICES) <= set(idx)

    # mirror symmetry on an asymmetric, tilted face
    rng = np.random.default_rng(SEED + 10)
    base = synthetic_face(512, 512, 0.3)
    face = base.with_points(base.points + rng.normal(scale=2.5, size=(106, 2)))
    m = (face.points[59] + face.points[68]) / 2
    u = (face.points[68] - face.points[59]) / np.linalg.norm(face.points[68] - face.points[59])
    pts = face.points[MIRROR]
    mirrored = face.with_points(pts - 2 * ((pts - m) @ u)[:, None] * u)
    cfg = ShrinkConfig(strength=6.0, border_anchors=0)
    plan = dict(zip(idx, moving_vectors(face, cfg).moving_vectors))
    plan_m = moving_vectors(mirrored, cfg)
    for i, v in zip(plan_m.control_indices, plan_m.moving_vectors):
        w = plan[int(MIRROR[i])]
        assert np.abs(v - (w - 2 * (w @ u) * u)).max() <= 1e-9

    # strength 0: bit-identical image for every method
    zero = plan_to_control_pairs(lm, moving_vectors(lm, ShrinkConfig(strength=0.0), 512, 512))
    for method in Method:
        assert np.array_equal(deform_image(img, zero, MlsParams(method=method)), img)

    # tilted face: moving vectors parallel to the eye axis
    tilted = synthetic_face(512, 512, math.pi / 6)
    ve = np.subtract(tilted.right_eye_center, tilted.left_eye_center)
    ve = ve / np.linalg.norm(ve)
    plan_t = moving_vectors(tilted, ShrinkConfig())
    checked = 0
    for i, v in zip(plan_t.control_indices, plan_t.moving_vectors):
        side = side_of_axis(tilted[i], tilted)
        if side is AxisSide.ON_AXIS or not v.any():
            continue
        sign = 1.0 if side is AxisSide.LEFT else -1.0
        assert abs(float(v @ ve) / np.linalg.norm(v) - sign) <= 1e-9
        checked += 1
    assert checked >= 30
