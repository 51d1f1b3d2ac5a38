"""
Timing the three MLS variants
=============================

The same shrink is timed with each method (minimum of several runs, image
I/O excluded). Affine needs only a 2x2 moment matrix per pixel; similarity
and rigid build a 2x2 matrix per control point per pixel, so they cost more
and about the same as each other.
"""

# %%
from facewarp import MlsParams, ShrinkConfig, synthetic_face
from facewarp.bench import bench
from facewarp.draw import render_face

lm = synthetic_face(512, 512)
img = render_face(lm, 512, 512)

for grid in (1, 4):
    report = bench(img, lm, ShrinkConfig(), MlsParams(grid_spacing=grid), reps=3)
    print(report.table())
    print(report.to_json())
    print()
