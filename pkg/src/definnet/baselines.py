"""Untrained comparison models: additive composition and hypernym lookup."""

from __future__ import annotations

import numpy as np

from .embed_store import EmbeddingTable, Vector
from .errors import ShapeError
from .wordnet import WordNetGraph, first_iv_hypernym


def additive(vec_h: Vector, vec_m: Vector) -> Vector:
    """Elementwise sum of the two definition-word embeddings."""
    vec_h = np.asarray(vec_h)
    vec_m = np.asarray(vec_m)
    if vec_h.shape != vec_m.shape:
        raise ShapeError(f"dim mismatch: {vec_h.shape} vs {vec_m.shape}")
    return vec_h + vec_m


def head_baseline(graph: WordNetGraph, table: EmbeddingTable, word: str, pos: str) -> Vector:
    """Embedding of the most specific in-vocabulary hypernym of `word`.

    Always returns a vector stored in `table` verbatim; never fabricates one.
    """
    _, vec = first_iv_hypernym(graph, word, pos, table)
    return vec
