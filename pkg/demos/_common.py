"""Shared helpers for the demo scripts: output folder and side-by-side montages."""

from pathlib import Path

import numpy as np

OUT = Path(__file__).parent / "output"


def montage(images, gap=6):
    h = max(im.shape[0] for im in images)
    sep = np.full((h, gap, 3), 255, dtype=np.uint8)
    parts = []
    for im in images:
        parts += [im[..., :3], sep]
    return np.hstack(parts[:-1])


def out_path(name):
    OUT.mkdir(exist_ok=True)
    return OUT / name
