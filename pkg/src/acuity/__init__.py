"""Toolkit for measuring and modeling classification error vs. object resolution.

Submodules:
    dataset    IDX container parsing, splits, uniform sampling
    resample   area-weighted decimation, object-pixel counts, display scaling
    session    randomized trial loop and the append-only trial log
    analytics  error tables, sigmoid error model, fit/inversion, camera sizing
    baseline   k-NN machine observer replaying the protocol
    simulate   scripted oracle labeler
    synthetic  deterministic digit dataset for data-free runs
    service    HTTP facade and static UI hosting
    cli        command-line interface
"""

from .analytics import (
    ErrorTableRow,
    SigmoidModel,
    aggregate_by_pixels,
    aggregate_by_resolution,
    camera_resolution,
    fit_sigmoid,
    manual_model,
    predict_error,
    required_resolution,
    table_to_csv,
)
from .baseline import ObserverReport, knn_observe, sweep_resolutions
from .dataset import (
    ExampleSet,
    LabeledExample,
    load_split,
    parse_idx_images,
    parse_idx_labels,
    sample_example,
)
from .resample import count_object_pixels, downsample_area, upscale_nearest
from .session import Trial, TrialRecord, TrialRunner, load_log

__version__ = "0.1.0"

__all__ = [
    "ErrorTableRow",
    "ExampleSet",
    "LabeledExample",
    "ObserverReport",
    "SigmoidModel",
    "Trial",
    "TrialRecord",
    "TrialRunner",
    "aggregate_by_pixels",
    "aggregate_by_resolution",
    "camera_resolution",
    "count_object_pixels",
    "downsample_area",
    "fit_sigmoid",
    "knn_observe",
    "load_log",
    "load_split",
    "manual_model",
    "parse_idx_images",
    "parse_idx_labels",
    "predict_error",
    "required_resolution",
    "sample_example",
    "sweep_resolutions",
    "table_to_csv",
    "upscale_nearest",
]
