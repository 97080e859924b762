"""Scripted oracle labeler: answers trials at a chosen error-vs-width curve.

The oracle answers with the true label with probability 1 - f(width) under
the given model, otherwise it picks uniformly among the ten wrong options
(including -1).  Useful for exercising the full record/aggregate/fit
pipeline without human subjects.
"""

import random
from pathlib import Path

from .analytics import SigmoidModel, predict_error
from .dataset import ExampleSet
from .session import TrialRecord, TrialRunner

__all__ = ["oracle_selection", "simulate_trials"]


def oracle_selection(
    rng: random.Random,
    true_label: int,
    resolution: int,
    model: SigmoidModel,
) -> int:
    """One oracle answer: correct with probability 1 - f(resolution)."""
    if rng.random() >= predict_error(resolution, model):
        return true_label
    wrong = [s for s in range(-1, 10) if s != true_label]
    return rng.choice(wrong)


def simulate_trials(
    split: ExampleSet,
    n_trials: int,
    model: SigmoidModel,
    log_path: str | Path,
    seed: int = 0,
    session_id: str = "oracle",
) -> list[TrialRecord]:
    """Run n_trials through the trial loop with oracle answers, appending to the log."""
    runner = TrialRunner(split, log_path, seed=seed)
    rng = random.Random(f"oracle:{seed}")
    records = []
    for _ in range(n_trials):
        trial, _ = runner.next_trial(session_id)
        selection = oracle_selection(rng, trial.true_label, trial.resolution, model)
        records.append(runner.record_response(trial.trial_id, selection, elapsed_ms=0))
    return records
