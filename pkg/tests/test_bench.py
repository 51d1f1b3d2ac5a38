import json

import numpy as np
import pytest

from facewarp.bench import BenchReport, bench
from facewarp.draw import render_face
from facewarp.landmarks import synthetic_face
from facewarp.mls import Method, MlsParams, deform_image
from facewarp.shrink import ShrinkConfig, shrink_control_pairs


@pytest.fixture(scope="module")
def small():
    lm = synthetic_face(128, 128, 0.05)
    return lm, render_face(lm, 128, 128)


def test_bench_outputs_match_direct_deformation(small):
    lm, img = small
    report = bench(img, lm, ShrinkConfig(), MlsParams(grid_spacing=2), reps=3)
    cps = shrink_control_pairs(lm, ShrinkConfig(), 128, 128)
    for method in Method:
        expected = deform_image(img, cps, MlsParams(method=method, grid_spacing=2))
        assert np.array_equal(report.outputs[method.value], expected)


def test_bench_requires_three_reps(small):
    lm, img = small
    with pytest.raises(ValueError):
        bench(img, lm, ShrinkConfig(), MlsParams(), reps=2)


def test_report_format():
    r = BenchReport(512, 256, 71, 4, 5, {"affine": 0.5, "similarity": 0.88, "rigid": 0.9})
    assert json.loads(r.to_json()) == {
        "image": {"w": 512, "h": 256},
        "n_controls": 71,
        "grid": 4,
        "reps": 5,
        "times_s": {"affine": 0.5, "similarity": 0.88, "rigid": 0.9},
    }
    lines = r.table().splitlines()
    assert lines[2].split() == ["affine", "0.500"]
    assert len(lines) == 5
