"""Procedurally generated cartoon-like images with painted annotations.

Used for the bundled demo corpus and for end-to-end tests. Each scene has a
background, one or more flat-shaded figures (face ellipse, neck, arm), hair
and clothing in colors that sometimes resemble skin, dark outlines, and a
shaded band on the skin. The annotation repaints exactly the skin pixels in
one of the two marker colors; outlines are left untouched.

Backgrounds and props never use saturated green or yellow, which would read
as markers in the annotation.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import RasterImage
from .ground_truth import GREEN_MARKER, YELLOW_MARKER, AnnotatedPair
from .raster import save_image

SKIN_TONES = [
    (255, 224, 196),
    (250, 206, 170),
    (236, 188, 150),
    (214, 160, 120),
    (180, 128, 92),
    (140, 96, 70),
    (255, 214, 190),
    # pale and yellowish tones close to the comparative thresholds
    (232, 200, 194),
    (226, 219, 160),
    (205, 190, 150),
]
HAIR_COLORS = [(30, 24, 20), (120, 70, 40), (200, 150, 110), (180, 40, 30), (200, 200, 205), (90, 60, 45)]
CLOTH_COLORS = [(40, 60, 150), (200, 40, 60), (230, 230, 235), (200, 140, 100), (60, 40, 90), (150, 110, 80)]
BACKGROUNDS = [(110, 150, 210), (235, 235, 240), (60, 60, 80), (220, 190, 160), (160, 80, 120), (20, 30, 60)]
OUTLINE = (25, 20, 25)


def _ellipse(h, w, cy, cx, ry, rx):
    yy, xx = np.mgrid[:h, :w]
    return ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0


def _outline(region: np.ndarray) -> np.ndarray:
    inner = region.copy()
    inner[1:, :] &= region[:-1, :]
    inner[:-1, :] &= region[1:, :]
    inner[:, 1:] &= region[:, :-1]
    inner[:, :-1] &= region[:, 1:]
    return region & ~inner


def make_scene(rng: np.random.Generator, width: int = 160, height: int = 120) -> tuple[np.ndarray, np.ndarray]:
    """Return (rgb uint8 image, bool skin mask) for one random scene."""
    img = np.empty((height, width, 3), dtype=np.int16)
    bg = np.array(BACKGROUNDS[rng.integers(len(BACKGROUNDS))])
    ramp = np.linspace(-20, 20, height)[:, None, None]
    img[...] = np.clip(bg + ramp, 0, 255)
    skin = np.zeros((height, width), dtype=bool)

    n_figures = int(rng.integers(1, 3))
    for k in range(n_figures):
        tone = np.array(SKIN_TONES[rng.integers(len(SKIN_TONES))])
        hair = np.array(HAIR_COLORS[rng.integers(len(HAIR_COLORS))])
        cloth = np.array(CLOTH_COLORS[rng.integers(len(CLOTH_COLORS))])
        cx = int(width * (k + 1) / (n_figures + 1) + rng.integers(-8, 9))
        cy = int(height * 0.4 + rng.integers(-6, 7))
        ry = int(rng.integers(16, 24))
        rx = int(ry * rng.uniform(0.7, 0.9))

        body = np.zeros_like(skin)
        body[cy + ry : height, max(cx - rx - 6, 0) : cx + rx + 6] = True
        neck = np.zeros_like(skin)
        neck[cy + ry - 4 : cy + ry + 6, cx - rx // 3 : cx + rx // 3] = True
        face = _ellipse(height, width, cy, cx, ry, rx)
        arm = np.zeros_like(skin)
        ax = cx + rx + int(rng.integers(8, 14))
        arm[cy + ry + 4 : min(cy + ry + 40, height), ax : ax + 6] = True
        hair_mask = _ellipse(height, width, cy - ry // 2, cx, ry // 2 + 3, rx + 3) & ~_ellipse(
            height, width, cy + 3, cx, ry - 2, rx - 2
        )

        img[body] = cloth
        figure_skin = (face | neck | arm) & ~hair_mask
        img[figure_skin] = tone
        # shaded band under the hairline, still skin
        shade = figure_skin & _ellipse(height, width, cy - ry // 3, cx, ry // 3, rx)
        img[shade] = np.clip(tone * 0.82, 0, 255).astype(np.int16)
        img[hair_mask] = hair

        lines = _outline(figure_skin) | _outline(hair_mask) | _outline(body)
        img[lines] = OUTLINE
        skin &= ~(lines | hair_mask | body)
        skin |= figure_skin & ~lines

    noise = rng.integers(-2, 3, size=img.shape)
    out = np.clip(img + noise, 0, 255).astype(np.uint8)
    return out, skin


def make_pair(rng: np.random.Generator, name: str, width: int = 160, height: int = 120) -> AnnotatedPair:
    rgb, skin = make_scene(rng, width, height)
    annotated = rgb.copy()
    marker = GREEN_MARKER if rng.integers(2) == 0 else YELLOW_MARKER
    annotated[skin] = marker
    return AnnotatedPair(RasterImage(rgb), RasterImage(annotated), name)


def make_corpus(n: int = 6, seed: int = 2024) -> list[AnnotatedPair]:
    rng = np.random.default_rng(seed)
    return [make_pair(rng, f"scene{i:02d}.png") for i in range(n)]


def write_corpus(directory: str | Path, n: int = 6, seed: int = 2024) -> list[Path]:
    """Write ``sceneNN.png`` / ``sceneNN.gt.png`` pairs; returns the original paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for pair in make_corpus(n, seed):
        orig = directory / pair.name
        save_image(pair.original, orig)
        save_image(pair.annotated, orig.with_name(orig.stem + ".gt.png"))
        written.append(orig)
    return written
