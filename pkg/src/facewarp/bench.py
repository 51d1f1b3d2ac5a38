"""Wall-time comparison of the three MLS variants on one shrink deformation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .landmarks import LandmarkSet
from .mls import ControlPairSet, Method, MlsParams, deform_image
from .shrink import ShrinkConfig, shrink_control_pairs


@dataclass
class BenchReport:
    width: int
    height: int
    n_controls: int
    grid: int
    reps: int
    times_s: dict  # method name -> minimum wall time in seconds
    outputs: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "image": {"w": self.width, "h": self.height},
            "n_controls": self.n_controls,
            "grid": self.grid,
            "reps": self.reps,
            "times_s": dict(self.times_s),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def table(self) -> str:
        lines = [
            f"MLS deformation time, {self.width}x{self.height}, "
            f"{self.n_controls} control pairs, grid {self.grid}, min of {self.reps}",
            f"{'method':<12}{'time (s)':>10}",
        ]
        for name, t in self.times_s.items():
            lines.append(f"{name:<12}{t:>10.3f}")
        return "\n".join(lines)


def time_deformation(img, cps: ControlPairSet, params: MlsParams, reps: int, threads: int = 1):
    """Minimum wall time over ``reps`` runs, and the (identical) output image."""
    best = float("inf")
    out = None
    for _ in range(reps):
        start = time.perf_counter()
        out = deform_image(img, cps, params, threads=threads)
        best = min(best, time.perf_counter() - start)
    return best, out


def bench(
    img: np.ndarray,
    lm: LandmarkSet,
    shrink_cfg: ShrinkConfig,
    params: MlsParams,
    methods=tuple(Method),
    reps: int = 5,
    threads: int = 1,
) -> BenchReport:
    """Time the same shrink deformation under each method, excluding image I/O."""
    if reps < 3:
        raise ValueError(f"need at least 3 repetitions, got {reps}")
    h, w = img.shape[:2]
    cps = shrink_control_pairs(lm, shrink_cfg, w, h)
    times, outputs = {}, {}
    for method in methods:
        method = Method(method)
        p = MlsParams(params.alpha, method, params.grid_spacing, params.snap_epsilon)
        times[method.value], outputs[method.value] = time_deformation(img, cps, p, reps, threads)
    return BenchReport(w, h, len(cps), params.grid_spacing, reps, times, outputs)
