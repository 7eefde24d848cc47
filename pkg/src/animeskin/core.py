"""Value types shared by every module: pixels, images and binary masks.

Images and masks wrap read-only numpy arrays in row-major (height, width)
layout, so ``image.pixels[y, x]`` is the pixel at column ``x`` and row ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from numpy.typing import NDArray


class SkinDetectionError(ValueError):
    """Base class for errors raised by this package."""


class InvalidDimensionError(SkinDetectionError):
    pass


class InvalidPairError(SkinDetectionError):
    pass


class TooSmallError(SkinDetectionError):
    pass


class EmptyDatasetError(SkinDetectionError):
    pass


class Rgb8Pixel(NamedTuple):
    r: int
    g: int
    b: int

    @classmethod
    def checked(cls, r: int, g: int, b: int) -> "Rgb8Pixel":
        for name, v in (("r", r), ("g", g), ("b", b)):
            if not 0 <= int(v) <= 255:
                raise ValueError(f"channel {name}={v} outside [0, 255]")
        return cls(int(r), int(g), int(b))


class HsvPixel(NamedTuple):
    h: float  # degrees, [0, 360)
    s: float  # [0, 1]
    v: float  # [0, 1]


def _frozen(arr: NDArray) -> NDArray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class RasterImage:
    """An 8-bit, 3-channel RGB image. ``pixels`` has shape (height, width, 3)."""

    pixels: NDArray[np.uint8]

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise InvalidDimensionError(f"expected (H, W, 3) pixels, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidDimensionError(f"image must be at least 1x1, got {arr.shape[1]}x{arr.shape[0]}")
        if arr.dtype != np.uint8:
            if np.issubdtype(arr.dtype, np.integer) and arr.min() >= 0 and arr.max() <= 255:
                arr = arr.astype(np.uint8)
            else:
                raise ValueError(f"pixels must be uint8 in [0, 255], got dtype {arr.dtype}")
        object.__setattr__(self, "pixels", _frozen(arr))

    @classmethod
    def from_pixels(cls, width: int, height: int, pixels: Iterable[tuple[int, int, int]]) -> "RasterImage":
        """Build from a row-major sequence of ``width * height`` RGB triples."""
        arr = np.asarray(list(pixels), dtype=np.int64)
        if arr.shape != (width * height, 3):
            raise InvalidDimensionError(
                f"expected {width * height} pixels for {width}x{height}, got {len(arr)}"
            )
        if arr.min(initial=0) < 0 or arr.max(initial=0) > 255:
            raise ValueError("channel values must lie in [0, 255]")
        return cls(arr.astype(np.uint8).reshape(height, width, 3))

    @classmethod
    def filled(cls, width: int, height: int, color: tuple[int, int, int]) -> "RasterImage":
        if width < 1 or height < 1:
            raise InvalidDimensionError(f"image must be at least 1x1, got {width}x{height}")
        arr = np.empty((height, width, 3), dtype=np.uint8)
        arr[...] = color
        return cls(arr)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[:2]

    def pixel(self, x: int, y: int) -> Rgb8Pixel:
        r, g, b = self.pixels[y, x]
        return Rgb8Pixel(int(r), int(g), int(b))


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-pixel skin flags: 1 = skin, 0 = non-skin. ``flags`` has shape (height, width)."""

    flags: NDArray[np.uint8]

    def __post_init__(self) -> None:
        arr = np.asarray(self.flags)
        if arr.ndim != 2:
            raise InvalidDimensionError(f"expected (H, W) flags, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidDimensionError(f"mask must be at least 1x1, got {arr.shape[1]}x{arr.shape[0]}")
        if arr.dtype == np.bool_:
            arr = arr.astype(np.uint8)
        elif arr.dtype != np.uint8 or arr.max() > 1:
            if not np.isin(arr, (0, 1)).all():
                raise ValueError("mask flags must be exactly 0 or 1")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "flags", _frozen(arr))

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def height(self) -> int:
        return self.flags.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.flags.shape

    def as_bool(self) -> NDArray[np.bool_]:
        return self.flags.astype(bool)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.flags, other.flags))

    __hash__ = None  # type: ignore[assignment]


def mask_new(width: int, height: int) -> BinaryMask:
    """An all-zero mask of the given size."""
    if width < 1 or height < 1:
        raise InvalidDimensionError(f"mask must be at least 1x1, got {width}x{height}")
    return BinaryMask(np.zeros((height, width), dtype=np.uint8))


def mask_count(mask: BinaryMask) -> int:
    return int(np.count_nonzero(mask.flags))
