"""Evaluation statistics: similarity distributions, rank correlation, AUC,
and the one-sided Wilcoxon signed-rank test.

Every report keeps its per-item values so that significance tests can be
recomputed from serialized results alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .embed_store import EmbeddingTable, cosine
from .errors import UndefinedStatisticError, UnusablePairError, ZeroNormError


@dataclass
class DistributionSummary:
    mean: float
    std: float
    n: int
    values: list[float]
    excluded: int = 0

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "n": self.n,
            "excluded": self.excluded,
            "values": self.values,
        }


@dataclass
class CorrelationReport:
    measure: str
    rhos: list[float]
    mean: float
    std: float
    dropped_unusable: int = 0
    dropped_undefined: int = 0

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "mean": self.mean,
            "std": self.std,
            "n_lists": len(self.rhos),
            "dropped_unusable": self.dropped_unusable,
            "dropped_undefined": self.dropped_undefined,
            "rhos": self.rhos,
        }


def _summary(values: list[float], excluded: int = 0) -> DistributionSummary:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise UndefinedStatisticError("no usable items to summarize")
    return DistributionSummary(
        mean=float(arr.mean()),
        std=float(arr.std()),
        n=int(arr.size),
        values=[float(v) for v in arr],
        excluded=excluded,
    )


# ---------------------------------------------------------------------------
# Rank statistics
# ---------------------------------------------------------------------------


def average_ranks(values) -> np.ndarray:
    """1-based ranks, tied values sharing their average rank."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.float64)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> float:
    """Spearman rank correlation: Pearson correlation of average ranks."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("spearman needs two equal-length 1-d sequences")
    if xs.size < 2:
        raise ValueError("spearman needs at least two items")
    rx = average_ranks(xs)
    ry = average_ranks(ys)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    vx = float(np.dot(rx, rx))
    vy = float(np.dot(ry, ry))
    if vx == 0.0 or vy == 0.0:
        raise UndefinedStatisticError("zero rank variance")
    return float(np.dot(rx, ry) / math.sqrt(vx * vy))


def auc_roc(scores, labels) -> float:
    """Probability that a sister pair outscores a random pair, ties half.

    `labels` entries are 'sister'/'random' strings or booleans (True=sister).
    """
    scores = np.asarray(scores, dtype=np.float64)
    pos = np.array([lab is True or lab == "sister" for lab in labels], dtype=bool)
    if len(pos) != scores.size:
        raise ValueError("scores and labels differ in length")
    n_pos = int(pos.sum())
    n_neg = int(scores.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise UndefinedStatisticError("AUC needs both classes present")
    ranks = average_ranks(scores)
    u = float(ranks[pos].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def _doubled_signed_ranks(a, b) -> tuple[np.ndarray, np.ndarray, int]:
    """Tie-averaged ranks of |a-b| doubled to exact integers, with signs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("wilcoxon needs two equal-length 1-d sequences")
    d = a - b
    nonzero = d != 0.0
    n_zero = int(d.size - nonzero.sum())
    d = d[nonzero]
    if d.size == 0:
        raise UndefinedStatisticError("all paired differences are zero")
    absd = np.abs(d)
    order = np.argsort(absd, kind="stable")
    doubled = np.empty(d.size, dtype=np.int64)
    i = 0
    while i < d.size:
        j = i
        while j + 1 < d.size and absd[order[j + 1]] == absd[order[i]]:
            j += 1
        doubled[order[i : j + 1]] = (i + 1) + (j + 1)  # twice the average rank
        i = j + 1
    return doubled, d > 0, n_zero


def wilcoxon_one_sided(a, b, exact_threshold: int = 25) -> float:
    """One-sided Wilcoxon signed-rank p-value for the alternative a > b.

    Zero differences are discarded (classic rule).  Up to `exact_threshold`
    nonzero differences the exact null distribution over sign assignments is
    used (ties handled through averaged ranks); beyond that, the normal
    approximation with tie-corrected variance and continuity correction.
    """
    doubled, positive, _ = _doubled_signed_ranks(a, b)
    n = int(doubled.size)
    w2 = int(doubled[positive].sum())
    if n <= exact_threshold:
        total = int(doubled.sum())
        counts = np.zeros(total + 1, dtype=np.float64)
        counts[0] = 1.0
        for r in doubled:
            counts[r:] = counts[r:] + counts[:-r]
        return float(counts[w2:].sum() / 2.0**n)
    w_plus = w2 / 2.0
    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    # tie correction: subtract sum(t^3 - t)/48 over groups of tied ranks
    _, tie_counts = np.unique(doubled, return_counts=True)
    var -= float(((tie_counts**3 - tie_counts) / 48.0).sum())
    if var <= 0:
        raise UndefinedStatisticError("zero variance in signed ranks")
    z = (w_plus - mu - 0.5) / math.sqrt(var)
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# Evaluation protocols
# ---------------------------------------------------------------------------


def direct_eval(predict_fn, records, table: EmbeddingTable) -> DistributionSummary:
    """Cosine between each word's predicted and stored embedding.

    `predict_fn(record)` returns a vector or raises UnusablePairError; such
    records (and words missing from `table`) are excluded and counted.
    """
    values: list[float] = []
    excluded = 0
    for rec in records:
        stored = table.lookup(rec.word)
        if stored is None:
            excluded += 1
            continue
        try:
            predicted = predict_fn(rec)
            values.append(cosine(predicted, stored))
        except (UnusablePairError, ZeroNormError, ValueError):
            excluded += 1
    return _summary(values, excluded)


def indirect_eval(predict_fn, lists, table: EmbeddingTable, measure: str) -> CorrelationReport:
    """Per-list Spearman between predicted-vs-known cosines and a taxonomy measure.

    Each list contributes one rho; lists with an unusable pair or undefined
    correlation are dropped and counted.
    """
    rhos: list[float] = []
    dropped_unusable = 0
    dropped_undefined = 0
    for plist in lists:
        scores = []
        sims = []
        try:
            for pair in plist.pairs:
                w2_vec = table.lookup(pair.w2)
                if w2_vec is None:
                    raise UnusablePairError(f"{pair.w2!r} not in table")
                predicted = predict_fn(pair.w1)
                scores.append(cosine(predicted, w2_vec))
                sims.append(pair.sims[measure])
        except (UnusablePairError, ZeroNormError, ValueError):
            dropped_unusable += 1
            continue
        try:
            rhos.append(spearman(scores, sims))
        except UndefinedStatisticError:
            dropped_undefined += 1
    if not rhos:
        raise UndefinedStatisticError("no list produced a defined correlation")
    arr = np.asarray(rhos, dtype=np.float64)
    return CorrelationReport(
        measure=measure,
        rhos=[float(r) for r in arr],
        mean=float(arr.mean()),
        std=float(arr.std()),
        dropped_unusable=dropped_unusable,
        dropped_undefined=dropped_undefined,
    )
