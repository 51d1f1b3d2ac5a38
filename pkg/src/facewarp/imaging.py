"""Raster images, PNG I/O, bilinear sampling and backward warping.

Images are ``numpy.uint8`` arrays of shape ``(height, width, channels)``
with 3 (RGB) or 4 (RGBA) channels, stored row-major.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageFormatError


def check_image(img: np.ndarray) -> np.ndarray:
    if not isinstance(img, np.ndarray) or img.dtype != np.uint8:
        raise ImageFormatError("image must be a numpy uint8 array")
    if img.ndim != 3 or img.shape[2] not in (3, 4):
        raise ImageFormatError(f"image must have shape (H, W, 3|4), got {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ImageFormatError("image must have at least one pixel")
    return img


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to nearest integer (ties away from zero) and clamp to uint8."""
    rounded = np.sign(values) * np.floor(np.abs(values) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def _bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    h, w = img.shape[:2]
    xs = np.clip(xs, 0.0, w - 1)
    ys = np.clip(ys, 0.0, h - 1)
    x0 = np.minimum(np.floor(xs).astype(np.intp), max(w - 2, 0))
    y0 = np.minimum(np.floor(ys).astype(np.intp), max(h - 2, 0))
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (xs - x0)[..., None]
    fy = (ys - y0)[..., None]
    src = img.astype(np.float64)
    top = src[y0, x0] * (1.0 - fx) + src[y0, x1] * fx
    bottom = src[y1, x0] * (1.0 - fx) + src[y1, x1] * fx
    return top * (1.0 - fy) + bottom * fy


def bilinear_sample(img: np.ndarray, x: float, y: float) -> np.ndarray:
    """Bilinearly interpolate ``img`` at the real-valued position ``(x, y)``.

    Each channel is interpolated independently from the four surrounding
    lattice pixels, rounded half away from zero and clamped to [0, 255].
    Positions outside the image are clamped to the border first.
    """
    check_image(img)
    value = _bilinear(img, np.array([x], dtype=np.float64), np.array([y], dtype=np.float64))
    return round_half_away(value)[0]


def sample_bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorized :func:`bilinear_sample` over arrays of coordinates."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    return round_half_away(_bilinear(img, xs, ys))


@dataclass
class BackwardMap:
    """Source sample positions for each output pixel.

    ``map_x[r, c]``/``map_y[r, c]`` give the source position read by output
    pixel ``(x=c, y=r)``. Pixels where ``mask`` is False are copied
    unchanged; ``mask=None`` means the whole image.
    """

    map_x: np.ndarray
    map_y: np.ndarray
    mask: Optional[np.ndarray] = None

    @classmethod
    def identity(cls, width: int, height: int) -> BackwardMap:
        ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
        return cls(xs, ys)

    @property
    def shape(self) -> tuple[int, int]:
        return self.map_x.shape

    def displacement(self) -> np.ndarray:
        """Per-pixel ``(dx, dy)`` between source position and pixel position."""
        h, w = self.shape
        ys, xs = np.mgrid[0:h, 0:w]
        return np.stack([self.map_x - xs, self.map_y - ys], axis=-1)


def warp_backward(src: np.ndarray, bmap: BackwardMap, threads: int = 1) -> np.ndarray:
    """Resample ``src`` through ``bmap``; pixels outside the mask are copied bit-exactly."""
    check_image(src)
    if bmap.shape != src.shape[:2]:
        raise ValueError(f"map shape {bmap.shape} does not match image {src.shape[:2]}")
    out = src.copy()
    if bmap.mask is None:
        rows, cols = np.mgrid[0 : src.shape[0], 0 : src.shape[1]]
        rows, cols = rows.ravel(), cols.ravel()
    else:
        rows, cols = np.nonzero(bmap.mask)
    if rows.size == 0:
        return out

    def work(sl: slice) -> None:
        r, c = rows[sl], cols[sl]
        out[r, c] = sample_bilinear(src, bmap.map_x[r, c], bmap.map_y[r, c])

    chunks = _chunks(rows.size, threads)
    if len(chunks) == 1:
        work(chunks[0])
    else:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, chunks))
    return out


def _chunks(n: int, threads: int, min_size: int = 16384) -> list[slice]:
    k = max(1, min(threads, n // min_size))
    bounds = np.linspace(0, n, k + 1).astype(int)
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]


# --------------------------------------------------------------------------
# PNG


PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def _png_bit_depth(path) -> int:
    with open(path, "rb") as fh:
        head = fh.read(33)
    if len(head) < 33 or head[:8] != PNG_SIGNATURE or head[12:16] != b"IHDR":
        raise ImageFormatError(f"{path}: not a valid PNG file")
    return head[24]


def load_png(path) -> np.ndarray:
    """Read an 8-bit RGB or RGBA PNG. Grayscale and palette images are expanded."""
    if _png_bit_depth(path) == 16:
        raise ImageFormatError(f"{path}: 16-bit PNG is not supported, use 8-bit RGB/RGBA")
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode not in ("RGB", "RGBA"):
                has_alpha = im.mode in ("LA", "PA") or "transparency" in im.info
                im = im.convert("RGBA" if has_alpha else "RGB")
            return np.array(im, dtype=np.uint8)
    except UnidentifiedImageError:
        raise ImageFormatError(f"{path}: not a valid PNG file") from None
    except (OSError, SyntaxError) as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        raise ImageFormatError(f"{path}: unreadable PNG ({exc})") from None


def save_png(img: np.ndarray, path) -> None:
    check_image(img)
    Image.fromarray(img, mode="RGBA" if img.shape[2] == 4 else "RGB").save(path, format="PNG")
