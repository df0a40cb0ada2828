import os

import numpy as np
import pytest

from definnet.datasets import read_corpus
from definnet.embed_store import EmbeddingTable
from definnet.wordnet import build_graph, load_wordnet

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


@pytest.fixture(scope="session")
def mini_wordnet_dir():
    return os.path.join(FIXTURES, "mini_wordnet")


@pytest.fixture(scope="session")
def mini_graph(mini_wordnet_dir):
    return load_wordnet(mini_wordnet_dir)


@pytest.fixture(scope="session")
def mini_corpus():
    records, meta = read_corpus(os.path.join(FIXTURES, "mini_corpus.tsv"))
    return records


@pytest.fixture()
def toy_graph():
    """root -> {A -> {A1, A2}, B}; five noun synsets."""
    return build_graph(
        [
            {"id": "00000001n", "pos": "n", "lemmas": ["root"], "gloss": "the top"},
            {"id": "00000002n", "pos": "n", "lemmas": ["alpha"], "gloss": "a thing",
             "hypernyms": ["00000001n"]},
            {"id": "00000003n", "pos": "n", "lemmas": ["alphaone"], "gloss": "a thing",
             "hypernyms": ["00000002n"]},
            {"id": "00000004n", "pos": "n", "lemmas": ["alphatwo"], "gloss": "a thing",
             "hypernyms": ["00000002n"]},
            {"id": "00000005n", "pos": "n", "lemmas": ["beta"], "gloss": "a thing",
             "hypernyms": ["00000001n"]},
        ]
    )


def make_table(name: str, vectors: dict[str, list[float]]) -> EmbeddingTable:
    dim = len(next(iter(vectors.values())))
    return EmbeddingTable.from_entries(
        name, dim, {k: np.asarray(v, dtype=np.float32) for k, v in vectors.items()}
    )


@pytest.fixture()
def small_table():
    return make_table(
        "small",
        {
            "feeling": [1.0, 0.0, 0.0],
            "sadness": [0.0, 1.0, 0.0],
            "state": [0.5, 0.5, 0.0],
            "dog": [0.0, 0.0, 1.0],
        },
    )
