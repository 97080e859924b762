"""Run the whole labeling study pipeline without humans.

Builds a synthetic IDX dataset on disk, replays the randomized trial loop
with an oracle labeler whose accuracy follows the reference curve, then
aggregates the trial log by width and by object pixels and fits the
sigmoid back out of the data.
"""

import tempfile
from pathlib import Path

from acuity.analytics import (
    aggregate_by_pixels,
    aggregate_by_resolution,
    fit_sigmoid,
    manual_model,
    model_to_csv,
    table_to_csv,
)
from acuity.dataset import load_split
from acuity.session import load_log
from acuity.simulate import simulate_trials
from acuity.synthetic import write_idx_dataset

TRUTH = manual_model(alpha=-0.95, center=6.5)


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = write_idx_dataset(Path(tmp) / "data", n_train=200, n_test=800, seed=0)
        split = load_split(data_dir, "t10k")
        log_path = Path(tmp) / "trials.jsonl"

        print("simulating 4000 oracle-labeled trials ...")
        simulate_trials(split, 4000, TRUTH, log_path, seed=11)
        records = load_log(log_path)

        by_resolution = aggregate_by_resolution(records)
        print("\nerror by image width")
        print(table_to_csv(by_resolution))

        print("error by object pixels (bins of 40)")
        print(table_to_csv(aggregate_by_pixels(records, bin_width=40)))

        fitted = fit_sigmoid(by_resolution)
        print("fitted model (alpha,center,residual,n_points,loss)")
        print(model_to_csv(fitted))
        print(
            f"generating curve was alpha={TRUTH.alpha}, center={TRUTH.center};"
            f" recovered alpha={fitted.alpha:.3f}, center={fitted.center:.3f}"
        )


if __name__ == "__main__":
    main()
