"""Deterministic MNIST-like digit rasters for demos and data-free runs.

Digits are seven-segment glyphs with class-specific proportions (aspect,
midline position, stroke weight) rendered with continuous geometry on a
4x supersampled grid and area-averaged down to 28x28, so edges are
antialiased and nearby sizes produce nearby rasters.  Heights vary widely
(7 to 22 px), which makes legibility degrade gradually as rasters shrink.
The background is exactly 0.

The generator writes the four canonical IDX files so the rest of the
toolkit exercises the same loading path it uses for the real dataset.
"""

import random
from pathlib import Path

import numpy as np

from .dataset import SPLIT_FILES, serialize_idx_images, serialize_idx_labels
from .resample import downsample_area

__all__ = ["make_examples", "render_digit", "write_idx_dataset"]

SIDE = 28
SUPERSAMPLE = 4

# Segment names: A top, B upper-right, C lower-right, D bottom, E lower-left,
# F upper-left, G middle.
DIGIT_SEGMENTS = {
    0: "ABCDEF",
    1: "BC",
    2: "ABGED",
    3: "ABGCD",
    4: "FGBC",
    5: "AFGCD",
    6: "AFGEDC",
    7: "ABC",
    8: "ABCDEFG",
    9: "ABCFGD",
}

# Per-class glyph proportions: width/height, midline position as a height
# fraction, and stroke weight as a height fraction.
CLASS_ASPECT = (0.62, 0.40, 0.66, 0.58, 0.70, 0.56, 0.60, 0.64, 0.54, 0.68)
CLASS_MIDLINE = (0.50, 0.52, 0.44, 0.56, 0.42, 0.54, 0.46, 0.58, 0.50, 0.44)
CLASS_STROKE = (0.16, 0.20, 0.15, 0.18, 0.17, 0.15, 0.19, 0.16, 0.17, 0.18)

HEIGHT_RANGE = (7.0, 22.0)
OFFSET_RANGE = 0.5
INTENSITY_RANGE = (215.0, 255.0)
SEGMENT_JITTER = 5.0
BACKGROUND_CUTOFF = 8


def _fill_rect(canvas: np.ndarray, r0: float, r1: float, c0: float, c1: float, level: float) -> None:
    """Max-composite a float-coordinate rectangle with fractional edge coverage."""
    n = canvas.shape[0]
    r0, r1 = max(0.0, r0), min(float(n), r1)
    c0, c1 = max(0.0, c0), min(float(n), c1)
    if r1 <= r0 or c1 <= c0:
        return
    cells = np.arange(n, dtype=np.float64)
    rows = np.clip(np.minimum(cells + 1.0, r1) - np.maximum(cells, r0), 0.0, 1.0)
    cols = np.clip(np.minimum(cells + 1.0, c1) - np.maximum(cells, c0), 0.0, 1.0)
    np.maximum(canvas, level * rows[:, None] * cols[None, :], out=canvas)


def render_digit(label: int, rng: random.Random) -> np.ndarray:
    """Render one digit with jittered size, position, and intensity."""
    n = SIDE * SUPERSAMPLE
    height = rng.uniform(*HEIGHT_RANGE) * SUPERSAMPLE
    width = height * CLASS_ASPECT[label] * rng.uniform(0.97, 1.03)
    stroke = height * CLASS_STROKE[label] * rng.uniform(0.94, 1.06)
    top = (n - height) / 2 + rng.uniform(-OFFSET_RANGE, OFFSET_RANGE) * SUPERSAMPLE
    left = (n - width) / 2 + rng.uniform(-OFFSET_RANGE, OFFSET_RANGE) * SUPERSAMPLE
    bottom, right = top + height, left + width
    mid = top + height * (CLASS_MIDLINE[label] + rng.uniform(-0.02, 0.02))
    base = rng.uniform(*INTENSITY_RANGE)

    canvas = np.zeros((n, n), dtype=np.float64)

    def segment(r0, r1, c0, c1):
        level = min(255.0, max(80.0, base + rng.uniform(-SEGMENT_JITTER, SEGMENT_JITTER)))
        _fill_rect(canvas, r0, r1, c0, c1, level)

    for name in DIGIT_SEGMENTS[label]:
        if name == "A":
            segment(top, top + stroke, left, right)
        elif name == "B":
            segment(top, mid, right - stroke, right)
        elif name == "C":
            segment(mid, bottom, right - stroke, right)
        elif name == "D":
            segment(bottom - stroke, bottom, left, right)
        elif name == "E":
            segment(mid, bottom, left, left + stroke)
        elif name == "F":
            segment(top, mid, left, left + stroke)
        elif name == "G":
            segment(mid - stroke / 2, mid + stroke / 2, left, right)

    fine = np.clip(np.rint(canvas), 0, 255).astype(np.uint8)
    coarse = downsample_area(fine, SIDE)
    coarse = coarse.copy()
    coarse[coarse < BACKGROUND_CUTOFF] = 0
    return coarse


def make_examples(n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """n digit images with uniform random labels, reproducible from the seed."""
    rng = random.Random(seed)
    images = np.zeros((n, SIDE, SIDE), dtype=np.uint8)
    labels = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        labels[i] = rng.randrange(10)
        images[i] = render_digit(int(labels[i]), rng)
    return images, labels


def write_idx_dataset(
    directory: str | Path,
    n_train: int = 4000,
    n_test: int = 1000,
    seed: int = 0,
) -> Path:
    """Write synthetic train and t10k splits as canonical IDX files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for split, count, split_seed in (("train", n_train, seed), ("t10k", n_test, seed + 1)):
        images, labels = make_examples(count, seed=split_seed)
        images_name, labels_name = SPLIT_FILES[split]
        (directory / images_name).write_bytes(serialize_idx_images(images))
        (directory / labels_name).write_bytes(serialize_idx_labels(labels))
    return directory
