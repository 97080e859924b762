"""MNIST IDX container parsing, split loading, and uniform example sampling.

Datasets are located in a directory holding the four canonical files
(train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-images-idx3-ubyte,
t10k-labels-idx1-ubyte), raw or gzipped; gzip is detected by magic bytes.
The 10,000-example t10k pair serves as the validation split shown to
labelers; the 60,000-example train pair feeds the machine observer only.
"""

import gzip
import os
import random
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyDataset, FormatError, UnsupportedShape

__all__ = [
    "DATA_DIR_ENV",
    "ExampleSet",
    "LabeledExample",
    "load_split",
    "pair_examples",
    "parse_idx_images",
    "parse_idx_labels",
    "resolve_data_dir",
    "sample_example",
    "serialize_idx_images",
    "serialize_idx_labels",
]

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

DATA_DIR_ENV = "HICEAA_DATA"

SPLIT_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "t10k": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass(frozen=True)
class LabeledExample:
    """One source image with its digit class and position in the source file."""

    image: np.ndarray
    label: int
    dataset_index: int


def parse_idx_images(data: bytes) -> np.ndarray:
    """Decode an IDX image stream into a read-only (n, side, side) uint8 array.

    The stream must begin with big-endian magic 0x00000803 and counts
    (n, rows, cols), followed by exactly n*rows*cols unsigned bytes.

    Raises:
        FormatError: wrong magic or payload length mismatch.
        UnsupportedShape: rows != cols.
    """
    if len(data) < 16:
        raise FormatError(f"images stream holds {len(data)} bytes, header needs 16")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGES_MAGIC:
        raise FormatError(f"images magic 0x{magic:08x}, expected 0x{IMAGES_MAGIC:08x}")
    if rows != cols:
        raise UnsupportedShape(f"{rows}x{cols} rasters are not square")
    if len(data) - 16 != count * rows * cols:
        raise FormatError(
            f"payload holds {len(data) - 16} bytes, expected {count * rows * cols}"
        )
    images = np.frombuffer(data, dtype=np.uint8, offset=16).reshape(count, rows, cols).copy()
    images.setflags(write=False)
    return images


def parse_idx_labels(data: bytes) -> np.ndarray:
    """Decode an IDX label stream into a read-only (n,) uint8 array of digits.

    Raises:
        FormatError: wrong magic, length mismatch, or a label byte > 9.
    """
    if len(data) < 8:
        raise FormatError(f"labels stream holds {len(data)} bytes, header needs 8")
    magic, count = struct.unpack(">II", data[:8])
    if magic != LABELS_MAGIC:
        raise FormatError(f"labels magic 0x{magic:08x}, expected 0x{LABELS_MAGIC:08x}")
    if len(data) - 8 != count:
        raise FormatError(f"payload holds {len(data) - 8} bytes, expected {count}")
    labels = np.frombuffer(data, dtype=np.uint8, offset=8).copy()
    if labels.size and labels.max() > 9:
        bad = int(labels.max())
        raise FormatError(f"label byte {bad} outside digit classes 0..9")
    labels.setflags(write=False)
    return labels


def serialize_idx_images(images: np.ndarray) -> bytes:
    """Inverse of parse_idx_images; parse(serialize(x)) is byte-identical."""
    images = np.asarray(images, dtype=np.uint8)
    n, rows, cols = images.shape
    return struct.pack(">IIII", IMAGES_MAGIC, n, rows, cols) + images.tobytes()


def serialize_idx_labels(labels: np.ndarray) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">II", LABELS_MAGIC, labels.shape[0]) + labels.tobytes()


class ExampleSet:
    """An immutable collection of labeled square images.

    Safe for concurrent readers; all arrays are read-only.
    """

    def __init__(self, images: np.ndarray, labels: np.ndarray, indices: np.ndarray | None = None):
        images = np.asarray(images, dtype=np.uint8)
        labels = np.asarray(labels, dtype=np.uint8)
        if images.shape[0] != labels.shape[0]:
            raise FormatError(
                f"{images.shape[0]} images paired with {labels.shape[0]} labels"
            )
        if indices is None:
            indices = np.arange(images.shape[0], dtype=np.int64)
        self.images = images.copy()
        self.labels = labels.copy()
        self.indices = np.asarray(indices, dtype=np.int64).copy()
        for arr in (self.images, self.labels, self.indices):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return self.images.shape[0]

    def __getitem__(self, i: int) -> LabeledExample:
        return LabeledExample(
            image=self.images[i],
            label=int(self.labels[i]),
            dataset_index=int(self.indices[i]),
        )

    @property
    def side(self) -> int:
        return self.images.shape[1]

    def subsample(self, n: int, seed: int) -> "ExampleSet":
        """Pick n distinct examples with a seeded draw, source order preserved."""
        if n > len(self):
            raise EmptyDataset(f"cannot subsample {n} of {len(self)} examples")
        rng = random.Random(seed)
        chosen = sorted(rng.sample(range(len(self)), n))
        return ExampleSet(self.images[chosen], self.labels[chosen], self.indices[chosen])


def pair_examples(images: np.ndarray, labels: np.ndarray) -> ExampleSet:
    """Pair an images file with its labels file, failing loudly on count mismatch."""
    return ExampleSet(images, labels)


def _read_maybe_gzip(path: Path) -> bytes:
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    return raw


def _locate(directory: Path, stem: str) -> Path:
    for name in (stem, stem + ".gz"):
        candidate = directory / name
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"neither {stem} nor {stem}.gz found in {directory}")


def load_split(directory: str | os.PathLike, split: str = "t10k") -> ExampleSet:
    """Load one of the canonical splits ("train" or "t10k") from a directory."""
    if split not in SPLIT_FILES:
        raise ValueError(f"unknown split {split!r}, expected one of {sorted(SPLIT_FILES)}")
    directory = Path(directory)
    images_stem, labels_stem = SPLIT_FILES[split]
    images = parse_idx_images(_read_maybe_gzip(_locate(directory, images_stem)))
    labels = parse_idx_labels(_read_maybe_gzip(_locate(directory, labels_stem)))
    return pair_examples(images, labels)


def resolve_data_dir(explicit: str | None = None) -> Path:
    """Dataset directory from an explicit flag value or the HICEAA_DATA env var."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    raise FileNotFoundError(
        f"no dataset directory: pass --dataset-dir or set {DATA_DIR_ENV}"
    )


def sample_example(split: ExampleSet, rng: random.Random) -> LabeledExample:
    """Draw one example uniformly at random; deterministic for a seeded rng."""
    if len(split) == 0:
        raise EmptyDataset("cannot sample from an empty split")
    return split[rng.randrange(len(split))]
