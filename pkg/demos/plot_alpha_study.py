"""
Effect of the weight exponent alpha
===================================

Small alpha spreads every control point's influence over the whole image,
so the many zero-displacement anchors win and the face barely changes.
Large alpha makes each pixel follow its nearest handle, exaggerating the
shrink. alpha = 1 sits in between.
"""

# %%
import numpy as np
from _common import montage, out_path

from facewarp import MlsParams, ShrinkConfig, build_backward_warp, deform_image, save_png
from facewarp import shrink_control_pairs, synthetic_face
from facewarp.draw import render_face

lm = synthetic_face(384, 384)
img = render_face(lm, 384, 384)
cps = shrink_control_pairs(lm, ShrinkConfig(strength=10.0), 384, 384)

# %%
outs = [img]
for alpha in (0.1, 1.0, 5.0):
    params = MlsParams(alpha=alpha)
    disp = build_backward_warp(cps, params, 384, 384).displacement()
    face = disp[150:330, 90:295]
    print(f"alpha={alpha:>4}: mean shift in face box {np.hypot(*np.moveaxis(face, -1, 0)).mean():.3f} px")
    outs.append(deform_image(img, cps, params))

save_png(montage(outs), out_path("alpha_study.png"))
print("wrote", out_path("alpha_study.png"))
