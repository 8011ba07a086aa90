"""Frame preprocessing: crop, grayscale, bilinear resize, normalize.

Raw images are uint8 arrays, (H, W, 3) RGB or (H, W) single-channel.
Frames are float32 arrays in [0, 1] with a fixed square extent.
"""

from __future__ import annotations

import numpy as np

from gazebot.errors import InputError

FRAME_SIZE = 128


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """BT.601 luma: y = 0.299 R + 0.587 G + 0.114 B, rounded to uint8."""
    img = np.asarray(img)
    if img.ndim == 2:
        return img.astype(np.uint8, copy=False)
    if img.ndim != 3 or img.shape[2] != 3:
        raise InputError(f"expected (H, W, 3) RGB image, got {img.shape}")
    rgb = img.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.rint(y).clip(0, 255).astype(np.uint8)


def resize_bilinear(img: np.ndarray, out_h: int = FRAME_SIZE, out_w: int = FRAME_SIZE) -> np.ndarray:
    """Bilinear resample of a single-channel image, normalized by 1/255.

    Pixel centers align (half-pixel convention), source edges clamp, so a
    same-size resize is the identity up to the 1/255 scaling.
    """
    img = np.asarray(img)
    if img.ndim != 2:
        raise InputError(f"resize expects a single-channel image, got {img.shape}")
    h, w = img.shape
    if h < 2 or w < 2:
        raise InputError(f"source too small to interpolate: {h}x{w}")
    src = img.astype(np.float64)

    ys = (np.arange(out_h) + 0.5) * (h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (w / out_w) - 0.5
    ys = ys.clip(0, h - 1)
    xs = xs.clip(0, w - 1)
    y0 = np.floor(ys).astype(int).clip(0, h - 2)
    x0 = np.floor(xs).astype(int).clip(0, w - 2)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]

    tl = src[np.ix_(y0, x0)]
    tr = src[np.ix_(y0, x0 + 1)]
    bl = src[np.ix_(y0 + 1, x0)]
    br = src[np.ix_(y0 + 1, x0 + 1)]
    out = tl * (1 - fy) * (1 - fx) + tr * (1 - fy) * fx + bl * fy * (1 - fx) + br * fy * fx
    return (out / 255.0).astype(np.float32)


def crop(img: np.ndarray, rect: tuple[int, int, int, int]) -> np.ndarray:
    """rect = (left, top, width, height), fully inside the image."""
    left, top, width, height = rect
    h, w = img.shape[:2]
    if width < 1 or height < 1:
        raise InputError(f"degenerate crop {rect}")
    if left < 0 or top < 0 or left + width > w or top + height > h:
        raise InputError(f"crop {rect} outside {w}x{h} image")
    return img[top : top + height, left : left + width]


def preprocess(
    img: np.ndarray,
    crop_rect: tuple[int, int, int, int] | None = None,
    size: int = FRAME_SIZE,
) -> np.ndarray:
    """crop -> grayscale -> resize -> normalize; returns a (size, size) frame."""
    if crop_rect is not None:
        img = crop(img, crop_rect)
    return resize_bilinear(to_grayscale(img), size, size)
