"""Decoding images and writing/reading rendered masks.

Masks are rendered black for skin and white for non-skin, always as
8-bit grayscale PNG so the binary content survives the round trip.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .core import BinaryMask, RasterImage, SkinDetectionError

INPUT_SUFFIXES = (".jpg", ".jpeg", ".png")
SKIN_VALUE = 0
NON_SKIN_VALUE = 255


class ImageReadError(SkinDetectionError):
    pass


def load_image(path: str | Path) -> RasterImage:
    """Decode a JPEG or PNG into RGB. Alpha is dropped; palette and gray images are expanded."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            rgb = im.convert("RGB")
    except FileNotFoundError:
        raise ImageReadError(f"{path}: no such file") from None
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageReadError(f"{path}: cannot decode image ({exc})") from None
    return RasterImage(np.asarray(rgb, dtype=np.uint8))


def save_image(img: RasterImage, path: str | Path) -> None:
    Image.fromarray(np.asarray(img.pixels)).save(path)


def render_mask(mask: BinaryMask) -> np.ndarray:
    return np.where(mask.as_bool(), SKIN_VALUE, NON_SKIN_VALUE).astype(np.uint8)


def save_mask(mask: BinaryMask, path: str | Path) -> None:
    Image.fromarray(render_mask(mask)).save(path, format="PNG")


def load_mask(path: str | Path) -> BinaryMask:
    """Read a rendered mask back: dark (< 128) is skin."""
    with Image.open(path) as im:
        gray = np.asarray(im.convert("L"))
    return BinaryMask((gray < 128).astype(np.uint8))
