"""Machine observer: replay the trial protocol with a k-NN classifier.

The observer runs the same decimation as the human study at every requested
width and classifies by majority label among the k nearest training images
under squared Euclidean distance on raw intensities.  Distances are integer
valued and computed exactly, so reports are bit-reproducible: distance ties
break toward the lower dataset index, vote ties toward the smaller label.
"""

import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .analytics import ErrorTableRow, SigmoidModel, fit_sigmoid, table_to_csv
from .dataset import ExampleSet
from .errors import EmptyDataset, InsufficientData
from .resample import downsample_batch

__all__ = ["ObserverReport", "knn_observe", "report_to_csv", "sweep_resolutions"]

DEFAULT_K = 3


@dataclass(frozen=True)
class ObserverReport:
    """Machine error curve in the same table schema as the human study."""

    observer_name: str
    train_size: int
    test_size: int
    rows: tuple[ErrorTableRow, ...]
    model: SigmoidModel | None
    wall_time_s: float


def _flatten(split: ExampleSet, resolution: int) -> np.ndarray:
    small = downsample_batch(split.images, resolution)
    return small.reshape(len(split), -1).astype(np.float64)


def _predict(train: ExampleSet, test: ExampleSet, resolution: int, k: int) -> np.ndarray:
    # Sort training examples by dataset index so a stable distance sort
    # breaks ties toward the lower index.
    order = np.argsort(train.indices, kind="stable")
    tr = _flatten(train, resolution)[order]
    tr_labels = train.labels[order]
    te = _flatten(test, resolution)

    # Squared Euclidean via the expansion; every term is an integer below
    # 2**53, so float64 arithmetic is exact and fully deterministic.
    cross = te @ tr.T
    d2 = (te * te).sum(axis=1)[:, None] + (tr * tr).sum(axis=1)[None, :] - 2.0 * cross

    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
    votes = tr_labels[nearest]
    predictions = np.empty(len(test), dtype=np.int64)
    for i in range(len(test)):
        counts = np.bincount(votes[i], minlength=10)
        predictions[i] = counts.argmax()  # argmax returns the smallest tied label
    return predictions


def knn_observe(
    train: ExampleSet,
    test: ExampleSet,
    resolution: int,
    k: int = DEFAULT_K,
) -> ErrorTableRow:
    """Error-rate row for one width: classify every test image at that width."""
    if len(train) == 0 or len(test) == 0:
        raise EmptyDataset("k-NN observer needs non-empty train and test splits")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    predictions = _predict(train, test, resolution, k)
    errors = int(np.sum(predictions != test.labels.astype(np.int64)))
    return ErrorTableRow(
        key=resolution,
        trials=len(test),
        errors=errors,
        error_rate=errors / len(test),
    )


def sweep_resolutions(
    train: ExampleSet,
    test: ExampleSet,
    k: int = DEFAULT_K,
    resolutions: Iterable[int] | None = None,
    fit: bool = True,
) -> ObserverReport:
    """One row per requested width (default 1..28), optionally with a fit."""
    if resolutions is None:
        resolutions = range(1, 29)
    start = time.perf_counter()
    rows = tuple(knn_observe(train, test, r, k) for r in sorted(set(resolutions)))
    model = None
    if fit:
        try:
            model = fit_sigmoid(list(rows))
        except InsufficientData:
            model = None
    return ObserverReport(
        observer_name=f"knn-k{k}",
        train_size=len(train),
        test_size=len(test),
        rows=rows,
        model=model,
        wall_time_s=time.perf_counter() - start,
    )


def report_to_csv(report: ObserverReport) -> str:
    """Table CSV with a metadata header line.

    Wall time is deliberately left out so identical inputs render
    byte-identical reports.
    """
    meta = (
        f"# observer={report.observer_name} train_size={report.train_size}"
        f" test_size={report.test_size}"
    )
    if report.model is not None:
        meta += f" alpha={report.model.alpha:.6g} center={report.model.center:.6g}"
    return meta + "\n" + table_to_csv(list(report.rows))
