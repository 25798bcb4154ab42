import json
from pathlib import Path

import pytest

from codeprobe.devcorpus import generate_snippets

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def snippet_pool():
    """200 synthetic snippets covering all labels of all four tasks."""
    return generate_snippets(seed=0)


@pytest.fixture(scope="session")
def hand_labeled():
    with open(DATA_DIR / "hand_labeled.json", encoding="utf-8") as fh:
        return json.load(fh)
