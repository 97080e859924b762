"""Aggregate trial records into error tables, fit the error-vs-width sigmoid,
evaluate and invert it, and size camera resolution for a field of view.

The model is y = 1 / (1 + exp(-(alpha*x + c))): alpha is the per-pixel slope
(negative when error falls as width grows), c the intercept term.  The
50%-error width sits at x = -c/alpha, not at c.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import expit, logit, xlogy

from .errors import (
    DegenerateDataWarning,
    DegenerateModel,
    DomainError,
    InsufficientData,
)

__all__ = [
    "ErrorTableRow",
    "RequiredResolution",
    "SigmoidModel",
    "aggregate_by_pixels",
    "aggregate_by_resolution",
    "camera_resolution",
    "fit_gradient",
    "fit_loss",
    "fit_sigmoid",
    "manual_model",
    "model_to_csv",
    "predict_error",
    "required_resolution",
    "table_to_csv",
]

MAX_FIT_ITERATIONS = 200
STEP_TOLERANCE = 1e-10
LOGIT_CLIP = (0.01, 0.99)


@dataclass(frozen=True)
class ErrorTableRow:
    """Aggregate error counts for one key (image width or object pixel count)."""

    key: int
    trials: int
    errors: int
    error_rate: float


@dataclass(frozen=True)
class SigmoidModel:
    """Fitted (alpha, center) pair with fit diagnostics.

    residual is the trial-weighted sum of squared rate residuals at the
    solution; loss names the objective that produced the estimate.
    """

    alpha: float
    center: float
    residual: float = float("nan")
    n_points: int = 0
    loss: str = "none"


class RequiredResolution(NamedTuple):
    width: float
    width_px: int


def _aggregate(keys, flags) -> list[ErrorTableRow]:
    counts: dict[int, list[int]] = {}
    for key, correct in zip(keys, flags):
        entry = counts.setdefault(int(key), [0, 0])
        entry[0] += 1
        entry[1] += 0 if correct else 1
    return [
        ErrorTableRow(key=key, trials=t, errors=e, error_rate=e / t)
        for key, (t, e) in sorted(counts.items())
    ]


def aggregate_by_resolution(records) -> list[ErrorTableRow]:
    """One row per image width present in the records, sorted by width."""
    return _aggregate((r.resolution for r in records), (r.correct for r in records))


def aggregate_by_pixels(records, bin_width: int = 1) -> list[ErrorTableRow]:
    """One row per object-pixel count (or per bin of bin_width counts).

    With bin_width > 1 a row's key is the lower edge of its bin
    [key, key + bin_width); totals are conserved across binnings.
    """
    if bin_width < 1:
        raise ValueError(f"bin width must be >= 1, got {bin_width}")
    keys = ((r.object_pixels // bin_width) * bin_width for r in records)
    return _aggregate(keys, (r.correct for r in records))


def table_to_csv(rows: Sequence[ErrorTableRow]) -> str:
    """Render a table as CSV with header key,trials,errors,error_rate."""
    lines = ["key,trials,errors,error_rate"]
    for row in rows:
        lines.append(f"{row.key},{row.trials},{row.errors},{row.error_rate:.6f}")
    return "\n".join(lines) + "\n"


def model_to_csv(model: SigmoidModel) -> str:
    """One-line model record: alpha,center,residual,n_points,loss."""
    return (
        f"{model.alpha:.12g},{model.center:.12g},{model.residual:.12g},"
        f"{model.n_points},{model.loss}\n"
    )


def predict_error(x, model: SigmoidModel):
    """Error rate 1/(1 + exp(-(alpha*x + c))) in an overflow-safe form.

    Accepts a scalar or an array of image widths.
    """
    t = model.alpha * np.asarray(x, dtype=np.float64) + model.center
    y = expit(t)
    return float(y) if y.ndim == 0 else y


def required_resolution(target_error: float, model: SigmoidModel) -> RequiredResolution:
    """Invert the model: the width at which the predicted error equals the target.

    Returns the real-valued width together with its ceiling, the smallest
    integer width meeting the target.

    Raises:
        DomainError: target_error outside (0, 1).
        DegenerateModel: alpha == 0 (flat curve has no inverse).
    """
    if not 0.0 < target_error < 1.0:
        raise DomainError(f"target error {target_error} outside (0, 1)")
    if model.alpha == 0.0:
        raise DegenerateModel("flat model (alpha = 0) cannot be inverted")
    width = (float(logit(target_error)) - model.center) / model.alpha
    return RequiredResolution(width=width, width_px=math.ceil(width))


def camera_resolution(fov: float, smallest_feature: float, nf: float) -> float:
    """Camera pixels needed to cover fov with nf pixels per smallest feature.

    fov and smallest_feature share any one length unit; the result is
    fov * nf / smallest_feature.
    """
    if fov <= 0 or smallest_feature <= 0 or nf <= 0:
        raise DomainError("fov, smallest_feature, and nf must all be positive")
    return fov * nf / smallest_feature


def _usable(table: Sequence[ErrorTableRow], x_values) -> tuple[np.ndarray, ...]:
    rows = [row for row in table if row.trials > 0]
    if x_values is None:
        x = np.array([row.key for row in rows], dtype=np.float64)
    else:
        x_all = np.asarray(x_values, dtype=np.float64)
        if x_all.shape[0] != len(table):
            raise ValueError("x_values length must match the table")
        x = np.array([x_all[i] for i, row in enumerate(table) if row.trials > 0])
    p = np.array([row.error_rate for row in rows], dtype=np.float64)
    w = np.array([row.trials for row in rows], dtype=np.float64)
    e = np.array([row.errors for row in rows], dtype=np.float64)
    return x, p, w, e


def _loss_value(theta: np.ndarray, x, p, w, e, loss: str) -> float:
    f = expit(theta[0] * x + theta[1])
    if loss == "wls":
        return float(np.sum(w * (p - f) ** 2))
    # binomial negative log-likelihood; xlogy keeps 0*log(0) at 0
    return float(-np.sum(xlogy(e, f) + xlogy(w - e, 1.0 - f)))


def _loss_gradient(theta: np.ndarray, x, p, w, e, loss: str) -> np.ndarray:
    t = theta[0] * x + theta[1]
    f = expit(t)
    if loss == "wls":
        common = 2.0 * w * (f - p) * f * (1.0 - f)
    else:
        common = w * f - e
    return np.array([np.sum(common * x), np.sum(common)])


def fit_loss(table, alpha: float, center: float, loss: str = "wls", x_values=None) -> float:
    """Objective value at (alpha, center) for the given table and loss."""
    x, p, w, e = _usable(table, x_values)
    return _loss_value(np.array([alpha, center]), x, p, w, e, loss)


def fit_gradient(table, alpha: float, center: float, loss: str = "wls", x_values=None) -> np.ndarray:
    """Analytic gradient of fit_loss with respect to (alpha, center)."""
    x, p, w, e = _usable(table, x_values)
    return _loss_gradient(np.array([alpha, center]), x, p, w, e, loss)


def _gauss_newton_direction(theta, x, p, w, e, loss: str) -> np.ndarray:
    t = theta[0] * x + theta[1]
    f = expit(t)
    fp = f * (1.0 - f)
    if loss == "wls":
        # residuals sqrt(w)*(p - f); J = -sqrt(w)*f' * [x, 1]
        jw = w * fp * fp
        h = np.array([[np.sum(jw * x * x), np.sum(jw * x)], [np.sum(jw * x), np.sum(jw)]])
        g = _loss_gradient(theta, x, p, w, e, loss) / 2.0
    else:
        # Fisher scoring for the binomial likelihood
        jw = w * fp
        h = np.array([[np.sum(jw * x * x), np.sum(jw * x)], [np.sum(jw * x), np.sum(jw)]])
        g = _loss_gradient(theta, x, p, w, e, loss)
    # Tikhonov floor keeps saturated curves (f' ~ 0 everywhere) solvable
    ridge = 1e-12 * max(1.0, float(np.trace(h)))
    h = h + ridge * np.eye(2)
    return -np.linalg.solve(h, g)


def fit_sigmoid(
    table: Sequence[ErrorTableRow],
    loss: str = "wls",
    x_values=None,
) -> SigmoidModel:
    """Fit (alpha, center) to an error table by damped Gauss-Newton.

    The default objective weights squared rate residuals by trial counts;
    loss="binomial" minimizes the binomial negative log-likelihood instead.
    Starting values come from an ordinary linear regression on the logit of
    the rates clipped to [0.01, 0.99]; rates of exactly 0 or 1 stay in the
    objective unclipped.  The optimizer is deterministic: the objective never
    increases, and iteration stops once the parameter step drops below 1e-10
    or after 200 iterations.

    Args:
        table: aggregate rows; rows with zero trials are ignored.
        loss: "wls" or "binomial".
        x_values: optional per-row x overriding the keys (e.g. sqrt of the
            object-pixel count for the secondary pixels-per-object mode).

    Raises:
        InsufficientData: fewer than two usable rows.

    Warns:
        DegenerateDataWarning: all rates identical; returns the flat model
        alpha=0 with center at the logit of the common rate.
    """
    if loss not in ("wls", "binomial"):
        raise ValueError(f"unknown loss {loss!r}, expected 'wls' or 'binomial'")
    x, p, w, e = _usable(table, x_values)
    if x.size < 2:
        raise InsufficientData(f"need at least 2 usable rows, got {x.size}")

    clipped = np.clip(p, *LOGIT_CLIP)
    if np.all(p == p[0]):
        warnings.warn(
            "all error rates identical; reporting a flat fit with alpha=0",
            DegenerateDataWarning,
            stacklevel=2,
        )
        center = float(logit(clipped[0]))
        theta = np.array([0.0, center])
        return SigmoidModel(
            alpha=0.0,
            center=center,
            residual=_loss_value(theta, x, p, w, e, "wls"),
            n_points=int(x.size),
            loss=loss,
        )

    z = logit(clipped)
    alpha0, center0 = np.polyfit(x, z, 1)
    theta = np.array([alpha0, center0], dtype=np.float64)
    value = _loss_value(theta, x, p, w, e, loss)

    for _ in range(MAX_FIT_ITERATIONS):
        direction = _gauss_newton_direction(theta, x, p, w, e, loss)
        scale = 1.0
        candidate, candidate_value = theta, value
        while scale >= 1e-14:
            trial = theta + scale * direction
            trial_value = _loss_value(trial, x, p, w, e, loss)
            if trial_value <= value:
                candidate, candidate_value = trial, trial_value
                break
            scale *= 0.5
        step = np.linalg.norm(candidate - theta)
        theta, value = candidate, candidate_value
        if step < STEP_TOLERANCE:
            break

    return SigmoidModel(
        alpha=float(theta[0]),
        center=float(theta[1]),
        residual=_loss_value(theta, x, p, w, e, "wls"),
        n_points=int(x.size),
        loss=loss,
    )


def manual_model(alpha: float, center: float) -> SigmoidModel:
    """A model built from explicit constants rather than a fit."""
    return SigmoidModel(alpha=alpha, center=center, residual=float("nan"), n_points=0, loss="manual")
