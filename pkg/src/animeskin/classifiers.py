"""Per-pixel skin rules and their application to whole images.

Every rule is written once over integer channel values and works unchanged on
Python ints or numpy arrays, so the scalar predicates and the image path share
a single definition. Thresholds are the fixed constants of each named method;
inequalities are strict exactly where the published rule is strict.

Methods I-III are the rules tuned for anime skin. Kovac, Swift, Saleh and
Osman are human-skin baselines, Takayama is an HSV rule from earlier cartoon
face-detection work.
"""

from __future__ import annotations

import enum
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .colorspace import hsv_components
from .core import BinaryMask, RasterImage, Rgb8Pixel


class ClassifierId(str, enum.Enum):
    KOVAC = "kovac"
    SWIFT = "swift"
    SALEH = "saleh"
    OSMAN = "osman"
    TAKAYAMA = "takayama"
    METHOD1 = "method1"
    METHOD2 = "method2"
    METHOD3 = "method3"

    @classmethod
    def parse(cls, name: "str | ClassifierId") -> "ClassifierId":
        if isinstance(name, ClassifierId):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            known = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown classifier {name!r} (expected one of: {known})") from None

    def __str__(self) -> str:
        return self.value


def list_classifiers() -> list[ClassifierId]:
    """All classifiers, baselines first, in the order reports use."""
    return list(ClassifierId)


def _all(*conds):
    out = conds[0]
    for c in conds[1:]:
        out = out & c
    return out


def kovac_rule(r, g, b):
    spread = np.maximum(np.maximum(r, g), b) - np.minimum(np.minimum(r, g), b)
    return _all(r > 95, g > 40, b > 20, spread > 15, abs(r - g) > 15, r > g, r > b)


def swift_rule(r, g, b):
    # B < R/4 as 4B < R, no float division
    not_skin = (b > r) | (g < b) | (g > r) | (4 * b < r) | (b > 200)
    return ~not_skin if isinstance(not_skin, np.ndarray) else not not_skin


def saleh_rule(r, g, b):
    d = r - g
    return (d > 20) & (d < 80)


def osman_rule(r, g, b):
    # 0 <= (R-G)/(R+G) <= 0.5 and B/(R+G) <= 0.5, cross-multiplied; R+G = 0 is non-skin
    s = r + g
    return _all(s > 0, r >= g, 2 * (r - g) <= s, 2 * b <= s)


def takayama_rule(r, g, b):
    h, _, v = hsv_components(r, g, b)
    return (h >= 0.0) & (h <= 40.0) & (v > 0.75)


def _method_ranges(r, g, b):
    return _all(120 < r, r < 255, 90 < g, g < 250, 70 < b, b < 218)


def method1_rule(r, g, b):
    return _all(_method_ranges(r, g, b), r > g + 10, g > b + 10)


def method2_rule(r, g, b):
    return _all(_method_ranges(r, g, b), r > g + 10, g > b)


def method3_rule(r, g, b):
    return _all(_method_ranges(r, g, b), r > g, g > b)


_RULES: dict[ClassifierId, Callable] = {
    ClassifierId.KOVAC: kovac_rule,
    ClassifierId.SWIFT: swift_rule,
    ClassifierId.SALEH: saleh_rule,
    ClassifierId.OSMAN: osman_rule,
    ClassifierId.TAKAYAMA: takayama_rule,
    ClassifierId.METHOD1: method1_rule,
    ClassifierId.METHOD2: method2_rule,
    ClassifierId.METHOD3: method3_rule,
}


def _pixel_predicate(rule: Callable) -> Callable[[Rgb8Pixel], bool]:
    def predicate(p: Rgb8Pixel) -> bool:
        return bool(rule(int(p[0]), int(p[1]), int(p[2])))

    predicate.__name__ = f"classify_{rule.__name__.removesuffix('_rule')}"
    predicate.__doc__ = f"True if the pixel is skin under :func:`{rule.__name__}`."
    return predicate


classify_kovac = _pixel_predicate(kovac_rule)
classify_swift = _pixel_predicate(swift_rule)
classify_saleh = _pixel_predicate(saleh_rule)
classify_osman = _pixel_predicate(osman_rule)
classify_takayama_pixel = _pixel_predicate(takayama_rule)
classify_method1 = _pixel_predicate(method1_rule)
classify_method2 = _pixel_predicate(method2_rule)
classify_method3 = _pixel_predicate(method3_rule)


def classify_pixel(p: Rgb8Pixel, cid: ClassifierId | str) -> bool:
    return bool(_RULES[ClassifierId.parse(cid)](int(p[0]), int(p[1]), int(p[2])))


def classify_array(rgb: NDArray, cid: ClassifierId | str) -> NDArray[np.bool_]:
    """Apply a rule to an integer array of shape (..., 3); returns a bool array of shape (...)."""
    rgb = np.asarray(rgb)
    if rgb.shape[-1] != 3:
        raise ValueError(f"last axis must hold 3 channels, got shape {rgb.shape}")
    chans = rgb.astype(np.int32, copy=False)
    out = _RULES[ClassifierId.parse(cid)](chans[..., 0], chans[..., 1], chans[..., 2])
    return np.asarray(out, dtype=bool)


def classify_image(img: RasterImage, cid: ClassifierId | str) -> BinaryMask:
    return BinaryMask(classify_array(img.pixels, cid).astype(np.uint8))
