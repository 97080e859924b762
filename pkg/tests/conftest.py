import numpy as np
import pytest

from acuity import dataset, synthetic

# Pool sizes for the shared synthetic dataset; the baseline tests subsample
# 2000 train / 500 test from these with seed 7.
TRAIN_POOL = 2500
TEST_POOL = 1000


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """Directory with the four canonical IDX files (synthetic digits)."""
    directory = tmp_path_factory.mktemp("idx-data")
    synthetic.write_idx_dataset(directory, n_train=TRAIN_POOL, n_test=TEST_POOL, seed=0)
    return directory


@pytest.fixture(scope="session")
def train_split(data_dir):
    return dataset.load_split(data_dir, "train")


@pytest.fixture(scope="session")
def validation_split(data_dir):
    return dataset.load_split(data_dir, "t10k")


@pytest.fixture(scope="session")
def rng_images():
    """200 uniform-noise images plus 100 synthetic digits for resampling tests."""
    rng = np.random.default_rng(1234)
    noise = rng.integers(0, 256, size=(200, 28, 28), dtype=np.uint8)
    digits, _ = synthetic.make_examples(100, seed=99)
    return noise, digits
