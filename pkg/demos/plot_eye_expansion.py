"""
Eye expansion with both center schemes
======================================

Each eye is warped inside a circle through its inner canthus. ``a = 50``
enlarges the eyes and ``a = -50`` shrinks them. The circle is centered
either on the eye-center landmark or on the midpoint of the two canthi.
"""

# %%
# A synthetic face stands in for detector output. Its eye-center landmark
# sits slightly above the canthus midpoint, like a real pupil.
from _common import montage, out_path

from facewarp import CenterScheme, ExpansionParams, expand_eyes, save_png, synthetic_face
from facewarp.draw import render_face

lm = synthetic_face(384, 384, tilt=0.15)
img = render_face(lm, 384, 384)

# %%
# One row per scheme: original, a = 50, a = -50.
rows = []
for scheme in CenterScheme:
    big = expand_eyes(img, lm, ExpansionParams(50, scheme))
    small = expand_eyes(img, lm, ExpansionParams(-50, scheme))
    rows.append(montage([img, big, small]))
    changed = (big != img).any(axis=2).sum()
    print(f"{scheme.value:>9}: {changed} pixels changed by a=50")

import numpy as np  # noqa: E402

save_png(np.vstack(rows), out_path("eye_expansion.png"))
print("wrote", out_path("eye_expansion.png"))
