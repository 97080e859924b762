"""Replay the trial protocol with the k-NN machine observer.

Sweeps every width from 1 to 28 with a desk-scale subsample and prints
the machine's error curve in the same table schema as the human study,
plus the sigmoid fitted to it.
"""

import tempfile
from pathlib import Path

from acuity.baseline import report_to_csv, sweep_resolutions
from acuity.dataset import load_split
from acuity.synthetic import write_idx_dataset


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = write_idx_dataset(Path(tmp), n_train=2500, n_test=1000, seed=0)
        train = load_split(data_dir, "train").subsample(2000, seed=7)
        test = load_split(data_dir, "t10k").subsample(500, seed=7)

        print("sweeping widths 1..28 with k=3 ...")
        report = sweep_resolutions(train, test, k=3)
        print(report_to_csv(report))
        print(f"sweep wall time: {report.wall_time_s:.1f}s")
        if report.model is not None:
            print(
                f"machine curve fit: alpha={report.model.alpha:.3f},"
                f" center={report.model.center:.3f}"
            )


if __name__ == "__main__":
    main()
