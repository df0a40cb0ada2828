"""Uniform record -> vector adapters for the evaluated models.

Every factory returns a callable taking a WordRecord and returning a numpy
vector, raising UnusablePairError when the record cannot be embedded; that
is the protocol the evaluation routines consume.
"""

from __future__ import annotations

import numpy as np

from .baselines import additive
from .denn import DennModel, predict_oov
from .embed_store import EmbeddingTable, UnknownNgramsError, ngram_compose
from .errors import DataError, NotInWordNetError, UnusablePairError
from .wordnet import WordNetGraph


def denn_predictor(model: DennModel, table: EmbeddingTable):
    def predict(rec):
        return predict_oov(model, table, rec.ensure_pair(), rec.pos_c)

    return predict


def additive_predictor(table: EmbeddingTable):
    """Sum of the definition words' embeddings; a missing modifier adds zero."""

    def predict(rec):
        pair = rec.ensure_pair()
        vec_h = table.lookup(pair.w_h)
        if vec_h is None:
            vec_h = table.lookup(pair.w_h.lower())
        if vec_h is None:
            raise UnusablePairError(f"super-type {pair.w_h!r} not in table")
        vec_m = None
        if pair.w_m is not None:
            vec_m = table.lookup(pair.w_m)
            if vec_m is None:
                vec_m = table.lookup(pair.w_m.lower())
        if vec_m is None:
            vec_m = np.zeros(table.dim, dtype=np.float32)
        return additive(vec_h, vec_m)

    return predict


def head_predictor(graph: WordNetGraph, table: EmbeddingTable):
    from .baselines import head_baseline

    def predict(rec):
        try:
            return head_baseline(graph, table, rec.word, rec.pos)
        except (NotInWordNetError, DataError) as exc:
            raise UnusablePairError(str(exc)) from None

    return predict


def ngram_predictor(ngrams: EmbeddingTable, n: int = 3, markers: bool = False):
    def predict(rec):
        try:
            return ngram_compose(ngrams, rec.word, n=n, markers=markers)
        except (UnknownNgramsError, ValueError) as exc:
            raise UnusablePairError(str(exc)) from None

    return predict


PREDICTOR_NAMES = ("definnet", "additive", "head", "ngram")
