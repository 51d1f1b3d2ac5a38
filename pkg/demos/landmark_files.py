"""
Landmark files and validation
=============================

Landmarks travel as JSON: ``{"schema_version": 1, "width": W, "height": H,
"points": [[x, y], ...]}`` with exactly 106 points. This script writes a
file, reads it back, and shows what validation reports.
"""

# %%
from _common import out_path

from facewarp import load_landmarks, select_group, synthetic_face, validate_against_image
from facewarp.landmarks import GroupId, save_landmarks

lm = synthetic_face(320, 240)
path = out_path("face_320x240.json")
save_landmarks(lm, path)
back = load_landmarks(path)
print("round trip exact:", back == lm)

# %%
for group in GroupId:
    idx = [i for i, _ in select_group(back, group)]
    print(f"{group.value:>17}: {len(idx):>2} points, indices {idx[0]}-{idx[-1]}")

# %%
# A point pushed off the image and a collapsed eye both show up in the report.
pts = back.points.copy()
pts[5] = (400.0, 12.0)
pts[59] = pts[55]
for issue in validate_against_image(back.with_points(pts), 320, 240):
    print(issue.kind, "-", issue.message)
