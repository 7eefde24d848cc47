"""RGB to HSV (hexcone model) for 8-bit pixels.

Hue is computed as ``60 * (difference) / chroma`` with the multiplication done
first, so integral hues such as 40 degrees come out exact in double precision.
Achromatic pixels get hue 0.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import HsvPixel, Rgb8Pixel


def hsv_components(
    r: ArrayLike, g: ArrayLike, b: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Vectorised conversion of integer channel arrays to (hue, saturation, value)."""
    r = np.asarray(r, dtype=np.int32)
    g = np.asarray(g, dtype=np.int32)
    b = np.asarray(b, dtype=np.int32)
    hi = np.maximum(np.maximum(r, g), b)
    lo = np.minimum(np.minimum(r, g), b)
    chroma = hi - lo

    # chroma == 0 branches are masked out below; avoid the division warning
    safe = np.where(chroma == 0, 1, chroma).astype(np.float64)
    h_red = 60.0 * (g - b) / safe
    h_red = np.where(h_red < 0, h_red + 360.0, h_red)
    h_green = 60.0 * (b - r) / safe + 120.0
    h_blue = 60.0 * (r - g) / safe + 240.0

    hue = np.where(hi == r, h_red, np.where(hi == g, h_green, h_blue))
    hue = np.where(chroma == 0, 0.0, hue)

    sat = np.where(hi == 0, 0.0, chroma / np.where(hi == 0, 1, hi).astype(np.float64))
    val = hi / 255.0
    return hue, sat, val


def rgb_to_hsv(p: Rgb8Pixel) -> HsvPixel:
    h, s, v = hsv_components(p[0], p[1], p[2])
    return HsvPixel(float(h), float(s), float(v))
