"""Area-weighted decimation, object-pixel counting, and nearest-neighbor display scaling.

Down-sampling is always recomputed from the original raster (never chained
through intermediate sizes) and is defined as a coverage-weighted box mean:
output pixel (i, j) averages the source intensities inside the axis-aligned
box [j*s, (j+1)*s) x [i*s, (i+1)*s), s = source_width / target_width, with
fractional boundary pixels weighted by the covered length along each axis.
The real-valued mean is rounded half-away-from-zero and clamped to [0, 255].
"""

import numpy as np

from .errors import ResampleError

__all__ = [
    "count_object_pixels",
    "downsample_area",
    "downsample_batch",
    "upscale_nearest",
]


def _require_square_gray(img: np.ndarray) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square 2-D raster, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"expected 8-bit intensities, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("intensities outside [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def _overlap_matrix(source: int, target: int) -> np.ndarray:
    """Coverage lengths between target intervals and unit source cells.

    Entry (j, u) is the length of [j*s, (j+1)*s) covered by source cell
    [u, u+1), s = source/target.  Each row sums to s.  For integer ratios
    every entry is exactly 0.0 or 1.0, so downstream sums stay exact.
    """
    edges = np.arange(target + 1, dtype=np.float64) * source / target
    cells = np.arange(source, dtype=np.float64)
    left = np.maximum(edges[:-1, None], cells[None, :])
    right = np.minimum(edges[1:, None], cells[None, :] + 1.0)
    return np.clip(right - left, 0.0, None)


def _round_half_away_from_zero(values: np.ndarray) -> np.ndarray:
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def _quantize(means: np.ndarray) -> np.ndarray:
    return np.clip(_round_half_away_from_zero(means), 0, 255).astype(np.uint8)


def downsample_area(img: np.ndarray, target_width: int) -> np.ndarray:
    """Shrink a square grayscale raster to target_width via area interpolation.

    Args:
        img: square (w, w) array of 8-bit intensities.
        target_width: output side length, 1 <= target_width <= w.

    Returns:
        (target_width, target_width) uint8 array of coverage-weighted,
        rounded block means.

    Raises:
        ResampleError: target_width is 0 or exceeds the source width.
    """
    img = _require_square_gray(img)
    source = img.shape[0]
    if not 1 <= target_width <= source:
        raise ResampleError(
            f"target width {target_width} outside [1, {source}] for a {source}x{source} source"
        )
    if target_width == source:
        return img.copy()
    w = _overlap_matrix(source, target_width)
    scale = source / target_width
    # Integer-valued partial sums are exact in float64; the single division
    # below is then correctly rounded, keeping integer-ratio cases bit-exact.
    means = w @ img.astype(np.float64) @ w.T / (scale * scale)
    return _quantize(means)


def downsample_batch(images: np.ndarray, target_width: int) -> np.ndarray:
    """Vectorized downsample_area over a stack of same-sized square images.

    Equivalent to applying downsample_area image by image; shares the same
    weight matrix and rounding path.
    """
    images = np.asarray(images)
    if images.ndim != 3 or images.shape[1] != images.shape[2]:
        raise ValueError(f"expected (n, w, w) image stack, got shape {images.shape}")
    source = images.shape[1]
    if not 1 <= target_width <= source:
        raise ResampleError(
            f"target width {target_width} outside [1, {source}] for a {source}x{source} source"
        )
    w = _overlap_matrix(source, target_width)
    scale = source / target_width
    means = (w[None, :, :] @ images.astype(np.float64) @ w.T[None, :, :]) / (scale * scale)
    return _quantize(means)


def count_object_pixels(img: np.ndarray) -> int:
    """Number of non-background pixels (intensity > 0, background is 0)."""
    return int(np.count_nonzero(_require_square_gray(img)))


def upscale_nearest(img: np.ndarray, display_width: int) -> np.ndarray:
    """Blow up a raster for display without inventing intensities.

    Output pixel (i, j) copies source pixel (floor(i*w/W), floor(j*w/W)).

    Raises:
        ResampleError: display_width is smaller than the source width.
    """
    img = _require_square_gray(img)
    source = img.shape[0]
    if display_width < source:
        raise ResampleError(f"display width {display_width} smaller than source {source}")
    idx = (np.arange(display_width) * source) // display_width
    return img[np.ix_(idx, idx)]
