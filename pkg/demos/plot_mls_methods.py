"""
Shrinking with affine, similarity and rigid MLS
===============================================

The nose, mouth and jaw landmarks are pushed toward the face midline and the
image follows through a Moving Least Squares warp. Without border anchors
the affine and similarity variants drag the image frame along; anchors pin
it for every method.
"""

# %%
import time

import numpy as np
from _common import montage, out_path

from facewarp import (
    Method,
    MlsParams,
    ShrinkConfig,
    deform_image,
    save_png,
    shrink_control_pairs,
    synthetic_face,
)
from facewarp.draw import render_face

lm = synthetic_face(384, 384)
img = render_face(lm, 384, 384)

# %%
# A strong shrink makes the differences between methods visible.
rows = []
for anchors in (0, 4):
    cps = shrink_control_pairs(lm, ShrinkConfig(strength=12.0, border_anchors=anchors), 384, 384)
    outs = [img]
    for method in Method:
        t = time.perf_counter()
        out = deform_image(img, cps, MlsParams(method=method))
        corner = np.abs(out[:8, :8].astype(int) - img[:8, :8]).max()
        print(f"anchors={anchors} {method.value:>10}: {time.perf_counter() - t:.3f}s, "
              f"max corner change {corner}")  # fmt: skip
        outs.append(out)
    rows.append(montage(outs))

save_png(np.vstack(rows), out_path("mls_methods.png"))
print("wrote", out_path("mls_methods.png"))
