"""Region-level skin segmentation: Canny edges, flood-filled regions, majority vote.

The pipeline labels every 4-connected region bounded by Canny edges, then
keeps a region as skin when more than ``skin_fraction`` of its pixels pass the
Takayama HSV rule. Edge pixels themselves are never skin.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from .classifiers import takayama_rule
from .core import BinaryMask, RasterImage, TooSmallError

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T.copy()


@dataclass(frozen=True, eq=False)
class GrayImage:
    intensities: NDArray[np.float64]  # (H, W), values in [0, 1]

    def __post_init__(self) -> None:
        arr = np.asarray(self.intensities, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected (H, W) intensities, got shape {arr.shape}")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("intensities must lie in [0, 1]")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "intensities", arr)

    @property
    def width(self) -> int:
        return self.intensities.shape[1]

    @property
    def height(self) -> int:
        return self.intensities.shape[0]


@dataclass(frozen=True)
class CannyParams:
    gaussian_sigma: float = 1.4
    low_threshold: float = 0.10
    high_threshold: float = 0.30

    def __post_init__(self) -> None:
        if not self.gaussian_sigma > 0:
            raise ValueError(f"gaussian_sigma must be > 0, got {self.gaussian_sigma}")
        if not 0 < self.low_threshold <= self.high_threshold <= 1:
            raise ValueError(
                f"need 0 < low <= high <= 1, got low={self.low_threshold}, high={self.high_threshold}"
            )


@dataclass(frozen=True, eq=False)
class RegionLabels:
    labels: NDArray[np.int32]  # 0 = edge, 1..count = region id
    count: int

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]


def to_grayscale(img: RasterImage) -> GrayImage:
    rgb = img.pixels.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    luma = (wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]) / 255.0
    return GrayImage(np.clip(luma, 0.0, 1.0))


def gaussian_kernel(sigma: float) -> NDArray[np.float64]:
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x**2) / (2 * sigma**2))
    return k / k.sum()


def _convolve_replicate(img: NDArray, kernel: NDArray) -> NDArray:
    ky, kx = kernel.shape
    py, px = ky // 2, kx // 2
    padded = np.pad(img, ((py, py), (px, px)), mode="edge")
    h, w = img.shape
    out = np.zeros_like(img, dtype=np.float64)
    # correlation with the flipped kernel == convolution
    flipped = kernel[::-1, ::-1]
    for dy in range(ky):
        for dx in range(kx):
            wgt = flipped[dy, dx]
            if wgt:
                out += wgt * padded[dy : dy + h, dx : dx + w]
    return out


def gradients(gray: GrayImage, sigma: float) -> tuple[NDArray, NDArray]:
    """Gaussian-smoothed Sobel gradients (gx along columns, gy along rows)."""
    k = gaussian_kernel(sigma)
    smooth = _convolve_replicate(gray.intensities, k[np.newaxis, :])
    smooth = _convolve_replicate(smooth, k[:, np.newaxis])
    # Sobel as correlation: positive gx where intensity grows to the right
    gx = _convolve_replicate(smooth, SOBEL_X[::-1, ::-1])
    gy = _convolve_replicate(smooth, SOBEL_Y[::-1, ::-1])
    return gx, gy


# (dx, dy) for gradient directions 0, 45, 90, 135 degrees (y grows downwards)
_DIRECTIONS = ((1, 0), (1, 1), (0, 1), (-1, 1))


def non_maximum_suppression(mag: NDArray, gx: NDArray, gy: NDArray) -> NDArray[np.bool_]:
    """Keep pixels that are ridge maxima across the quantised gradient direction.

    A pixel must be strictly above its neighbour behind it (against the
    gradient) and at least equal to the one ahead, so a symmetric two-pixel
    ridge keeps exactly one pixel: the one on the darker side.
    """
    h, w = mag.shape
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    sector = (((angle + 22.5) // 45.0).astype(np.int64)) % 4
    padded = np.pad(mag, 1, mode="constant")
    keep = np.zeros((h, w), dtype=bool)
    for s, (dx, dy) in enumerate(_DIRECTIONS):
        sel = sector == s
        ahead_pos = padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        ahead_neg = padded[1 - dy : 1 - dy + h, 1 - dx : 1 - dx + w]
        along = gx * dx + gy * dy >= 0
        ahead = np.where(along, ahead_pos, ahead_neg)
        behind = np.where(along, ahead_neg, ahead_pos)
        keep |= sel & (mag > behind) & (mag >= ahead)
    return keep & (mag > 0)


def hysteresis(candidates: NDArray[np.float64], low: float, high: float) -> NDArray[np.bool_]:
    """Keep weak pixels (>= low) only when 8-connected to a strong one (>= high)."""
    weak = candidates >= low
    strong = candidates >= high
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return np.zeros_like(weak)
    has_strong = np.zeros(n + 1, dtype=bool)
    has_strong[np.unique(labels[strong])] = True
    has_strong[0] = False
    return has_strong[labels]


def canny_edges(gray: GrayImage, params: CannyParams | None = None) -> BinaryMask:
    """Binary edge map (1 = edge). Thresholds are fractions of the maximum gradient magnitude."""
    params = params or CannyParams()
    if gray.width < 3 or gray.height < 3:
        raise TooSmallError(f"edge detection needs at least 3x3 pixels, got {gray.width}x{gray.height}")
    gx, gy = gradients(gray, params.gaussian_sigma)
    mag = np.hypot(gx, gy)
    peak = float(mag.max())
    # relative floor guards against float noise on flat images
    if peak <= 1e-9:
        return BinaryMask(np.zeros(mag.shape, dtype=np.uint8))
    thin = np.where(non_maximum_suppression(mag, gx, gy), mag, 0.0)
    edges = hysteresis(thin, params.low_threshold * peak, params.high_threshold * peak)
    return BinaryMask(edges.astype(np.uint8))


def _row_runs(free_row: NDArray[np.bool_]) -> tuple[list[int], list[int]]:
    padded = np.concatenate(([False], free_row, [False])).astype(np.int8)
    d = np.diff(padded)
    return np.flatnonzero(d == 1).tolist(), np.flatnonzero(d == -1).tolist()


def flood_fill_regions(edges: BinaryMask) -> RegionLabels:
    """Label maximal 4-connected non-edge regions by scanline flood fill.

    Regions are numbered 1..K in raster order of their first pixel; edge
    pixels get 0.
    """
    free = ~edges.as_bool()
    h, w = free.shape
    runs = [_row_runs(free[y]) for y in range(h)]
    run_label = [[0] * len(starts) for starts, _ in runs]
    labels = np.zeros((h, w), dtype=np.int32)

    def overlapping(y: int, s: int, e: int) -> range:
        starts, ends = runs[y]
        # runs [s2, e2) with s2 < e and e2 > s
        return range(bisect_right(ends, s), bisect_left(starts, e))

    count = 0
    for y0 in range(h):
        for i0 in range(len(runs[y0][0])):
            if run_label[y0][i0]:
                continue
            count += 1
            run_label[y0][i0] = count
            stack = [(y0, i0)]
            while stack:
                y, i = stack.pop()
                s, e = runs[y][0][i], runs[y][1][i]
                labels[y, s:e] = count
                for ny in (y - 1, y + 1):
                    if 0 <= ny < h:
                        for j in overlapping(ny, s, e):
                            if not run_label[ny][j]:
                                run_label[ny][j] = count
                                stack.append((ny, j))
    return RegionLabels(labels, count)


def takayama_segment(
    img: RasterImage,
    params: CannyParams | None = None,
    skin_fraction: float = 0.5,
) -> BinaryMask:
    if not 0.0 <= skin_fraction <= 1.0:
        raise ValueError(f"skin_fraction must lie in [0, 1], got {skin_fraction}")
    edges = canny_edges(to_grayscale(img), params)
    regions = flood_fill_regions(edges)
    rgb = img.pixels.astype(np.int32)
    passing = takayama_rule(rgb[..., 0], rgb[..., 1], rgb[..., 2])
    n = regions.count + 1
    sizes = np.bincount(regions.labels.ravel(), minlength=n)
    hits = np.bincount(regions.labels.ravel(), weights=passing.ravel(), minlength=n)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(sizes > 0, hits / np.maximum(sizes, 1), 0.0)
    skin_region = frac > skin_fraction
    skin_region[0] = False
    return BinaryMask(skin_region[regions.labels].astype(np.uint8))
