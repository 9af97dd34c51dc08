from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from liu_replica import DATASET_STATS, write_liu_replica  # noqa: E402

from aspectflow.corpus import load_review_file  # noqa: E402
from aspectflow.sentiment import TrainConfig, seed_corpus_path, train  # noqa: E402


@pytest.fixture(scope="session")
def liu_dir(tmp_path_factory) -> Path:
    """Directory with computer.txt / router.txt / speaker.txt.

    Uses the real datasets when ASPECTFLOW_LIU_DIR points at them,
    otherwise writes the synthetic replicas.
    """
    env = os.environ.get("ASPECTFLOW_LIU_DIR")
    if env:
        root = Path(env)
        missing = [n for n in DATASET_STATS if not (root / f"{n}.txt").is_file()]
        if missing:
            raise FileNotFoundError(f"ASPECTFLOW_LIU_DIR is missing: {missing}")
        return root
    root = tmp_path_factory.mktemp("liu_replicas")
    for name in DATASET_STATS:
        write_liu_replica(root / f"{name}.txt", name)
    return root


@pytest.fixture(scope="session")
def seed_model():
    """Model trained on the bundled seed corpus with default settings."""
    return train(load_review_file(seed_corpus_path()), TrainConfig())
