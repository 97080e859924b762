"""Drive the HTTP labeling service with a scripted client.

Starts the service in-process on a free port, answers twenty trials over
the wire (decoding the raw base64 pixel payloads), then asks the stats
endpoint for the aggregate table and prints it.
"""

import base64
import json
import random
import tempfile
import urllib.request
from pathlib import Path

from acuity.dataset import load_split
from acuity.service import LabelService, running_server
from acuity.session import TrialRunner
from acuity.synthetic import write_idx_dataset


def get_json(url):
    with urllib.request.urlopen(url) as response:
        return json.loads(response.read())


def post_json(url, payload):
    request = urllib.request.Request(
        url, data=json.dumps(payload).encode(), headers={"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


def main() -> None:
    rng = random.Random(1)
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = write_idx_dataset(Path(tmp), n_train=100, n_test=500, seed=0)
        split = load_split(data_dir, "t10k")
        runner = TrialRunner(split, Path(tmp) / "trials.jsonl", seed=3)

        with running_server(LabelService(runner)) as httpd:
            base = f"http://127.0.0.1:{httpd.server_address[1]}"
            print(f"service up at {base}\n")
            print("trial_id  width  decoded_bytes  guess")
            for _ in range(20):
                trial = get_json(f"{base}/api/v1/trial?session=demo")
                pixels = base64.b64decode(trial["pixels_b64"])
                guess = rng.randint(-1, 9)  # a labeler shrugging at random
                post_json(
                    f"{base}/api/v1/response",
                    {"trial_id": trial["trial_id"], "selection": guess, "elapsed_ms": 250},
                )
                print(
                    f"{trial['trial_id'][:8]}  {trial['width']:5d}"
                    f"  {len(pixels):13d}  {guess:5d}"
                )

            with urllib.request.urlopen(f"{base}/api/v1/stats?by=resolution&format=csv") as r:
                print("\naggregate over the log so far:")
                print(r.read().decode())


if __name__ == "__main__":
    main()
