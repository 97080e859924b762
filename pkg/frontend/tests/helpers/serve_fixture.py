"""Start the labeling service on a free port for the frontend tests.

Prints PORT=<n> and LOG=<path> lines, then serves until killed.
"""

import sys
import tempfile
from pathlib import Path

from acuity.dataset import load_split
from acuity.service import LabelService, create_server
from acuity.session import TrialRunner
from acuity.synthetic import write_idx_dataset


def main() -> None:
    tmp = Path(tempfile.mkdtemp(prefix="acuity-webui-test-"))
    data_dir = write_idx_dataset(tmp / "data", n_train=50, n_test=300, seed=0)
    split = load_split(data_dir, "t10k")
    runner = TrialRunner(split, tmp / "trials.jsonl", seed=0)
    httpd = create_server(LabelService(runner), port=0)
    print(f"PORT={httpd.server_address[1]}", flush=True)
    print(f"LOG={runner.log_path}", flush=True)
    try:
        httpd.serve_forever(poll_interval=0.1)
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()


if __name__ == "__main__":
    sys.exit(main())
