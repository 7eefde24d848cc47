"""Recover binary ground truth from hand-painted annotation images.

Annotators paint skin pixels pure green (0, 255, 0) or pure yellow
(255, 255, 0). The extractor accepts a band around each paint color so that
anti-aliasing and light compression noise still read as markers.

Annotation conventions for people preparing a corpus:

* outlines and edges are not skin;
* shaded skin is skin;
* where hair or cloth meets skin, paint the pixel only if it is close in
  color to the surrounding skin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .core import BinaryMask, InvalidPairError, RasterImage, Rgb8Pixel

GREEN_MARKER = Rgb8Pixel(0, 255, 0)
YELLOW_MARKER = Rgb8Pixel(255, 255, 0)
DEFAULT_TOLERANCE = 2


def _marker_rule(r, g, b):
    green = (r < 120) & (g > 200) & (b < 100)
    yellow = (r > 200) & (g > 200) & (b < 100)
    return green | yellow


def is_annotation_marker(p: Rgb8Pixel) -> bool:
    return bool(_marker_rule(int(p[0]), int(p[1]), int(p[2])))


def marker_array(rgb: NDArray) -> NDArray[np.bool_]:
    chans = np.asarray(rgb).astype(np.int32, copy=False)
    return _marker_rule(chans[..., 0], chans[..., 1], chans[..., 2])


def extract_ground_truth(annotated: RasterImage) -> BinaryMask:
    return BinaryMask(marker_array(annotated.pixels).astype(np.uint8))


@dataclass(frozen=True, eq=False)
class AnnotatedPair:
    original: RasterImage
    annotated: RasterImage
    name: str = ""

    def __post_init__(self) -> None:
        if self.original.shape != self.annotated.shape:
            raise InvalidPairError(
                f"{self.name or 'pair'}: original is {self.original.width}x{self.original.height}, "
                f"annotation is {self.annotated.width}x{self.annotated.height}"
            )


@dataclass(frozen=True)
class PairValidation:
    name: str
    deviations: int
    tolerance: int
    deviating_sample: list[tuple[int, int]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.deviations == 0


def validate_pair(pair: AnnotatedPair, tolerance: int = DEFAULT_TOLERANCE) -> PairValidation:
    """Count non-marker pixels of the annotation that drift from the original.

    Painting should only touch skin, so any non-marker pixel differing by more
    than ``tolerance`` in some channel points to paint spill or a mispaired
    file. ``deviating_sample`` holds up to ten (x, y) positions for reporting.
    """
    if pair.original.shape != pair.annotated.shape:
        raise InvalidPairError(f"{pair.name or 'pair'}: dimension mismatch")
    orig = pair.original.pixels.astype(np.int16)
    ann = pair.annotated.pixels.astype(np.int16)
    drift = np.abs(orig - ann).max(axis=2) > tolerance
    bad = drift & ~marker_array(pair.annotated.pixels)
    ys, xs = np.nonzero(bad)
    sample = [(int(x), int(y)) for x, y in zip(xs[:10], ys[:10])]
    return PairValidation(pair.name, int(bad.sum()), tolerance, sample)
