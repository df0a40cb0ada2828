import itertools
import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from definnet.errors import UndefinedStatisticError, UnusablePairError
from definnet.evaluation import (
    auc_roc,
    average_ranks,
    direct_eval,
    indirect_eval,
    spearman,
    wilcoxon_one_sided,
)

from conftest import make_table

# ---------------------------------------------------------------------------
# Brute-force oracles (independent of the implementations under test)
# ---------------------------------------------------------------------------


def oracle_ranks(values):
    out = []
    for i, v in enumerate(values):
        smaller = sum(1 for w in values if w < v)
        equal = sum(1 for j, w in enumerate(values) if w == v and j != i)
        out.append(1 + smaller + equal / 2.0)
    return out


def oracle_spearman(xs, ys):
    rx, ry = oracle_ranks(xs), oracle_ranks(ys)
    n = len(rx)
    mx, my = sum(rx) / n, sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if vx == 0 or vy == 0:
        return None
    return cov / math.sqrt(vx * vy)


def oracle_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == "sister"]
    neg = [s for s, l in zip(scores, labels) if l == "random"]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


def oracle_wilcoxon(a, b):
    d = [x - y for x, y in zip(a, b) if x != y]
    ranks = oracle_ranks([abs(x) for x in d])
    w_obs = sum(r for r, x in zip(ranks, d) if x > 0)
    n = len(d)
    hits = 0
    for signs in itertools.product((0, 1), repeat=n):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if w >= w_obs:
            hits += 1
    return hits / 2.0**n


# ---------------------------------------------------------------------------
# Spearman
# ---------------------------------------------------------------------------


class TestSpearman:
    def test_identical_orderings(self):
        assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)

    def test_reversed(self):
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)

    def test_hand_computed_swap(self):
        xs = [1, 2, 3, 4, 5, 6, 7]
        ys = [2, 1, 3, 4, 5, 6, 7]
        assert spearman(xs, ys) == pytest.approx(27 / 28, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(UndefinedStatisticError):
            spearman([1, 1, 1], [1, 2, 3])

    def test_matches_oracle_on_random_instances(self):
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 120:
            n = int(rng.integers(2, 12))
            xs = rng.integers(0, 6, n).astype(float)
            ys = rng.integers(0, 6, n).astype(float)
            want = oracle_spearman(xs, ys)
            if want is None:
                with pytest.raises(UndefinedStatisticError):
                    spearman(xs, ys)
            else:
                assert spearman(xs, ys) == pytest.approx(want, abs=1e-12)
            checked += 1

    @given(st.lists(st.integers(-50, 50), min_size=3, max_size=20, unique=True),
           st.sampled_from([lambda x: 3 * x + 1, lambda x: x**3, lambda x: math.exp(x / 50)]))
    @settings(max_examples=60)
    def test_monotone_transform_invariant(self, xs, f):
        rng = np.random.default_rng(len(xs))
        ys = rng.standard_normal(len(xs))
        base = spearman(xs, ys)
        assert spearman([f(x) for x in xs], ys) == pytest.approx(base, abs=1e-9)

    def test_average_ranks_ties(self):
        np.testing.assert_allclose(average_ranks([10, 20, 20, 30]), [1, 2.5, 2.5, 4])


# ---------------------------------------------------------------------------
# AUC
# ---------------------------------------------------------------------------


class TestAuc:
    def test_perfect_separation(self):
        assert auc_roc([0.9, 0.8, 0.2, 0.1], ["sister", "sister", "random", "random"]) == 1.0

    def test_all_ties(self):
        assert auc_roc([0.5, 0.5, 0.5, 0.5], ["sister", "random", "sister", "random"]) == 0.5

    def test_hand_case(self):
        assert auc_roc([0.9, 0.8, 0.4, 0.3], ["sister", "random", "sister", "random"]) == 0.75

    def test_single_class_rejected(self):
        with pytest.raises(UndefinedStatisticError):
            auc_roc([1.0, 2.0], ["sister", "sister"])

    def test_matches_oracle_on_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(120):
            n = int(rng.integers(2, 14))
            labels = ["sister" if x else "random" for x in rng.integers(0, 2, n)]
            if "sister" not in labels or "random" not in labels:
                continue
            scores = rng.integers(0, 5, n).astype(float)
            assert auc_roc(scores, labels) == pytest.approx(
                oracle_auc(scores, labels), abs=1e-12
            )

    def test_negation_flips_when_no_ties(self):
        rng = np.random.default_rng(8)
        scores = rng.permutation(20).astype(float)
        labels = ["sister" if x else "random" for x in rng.integers(0, 2, 20)]
        if "sister" in labels and "random" in labels:
            assert auc_roc(scores, labels) == pytest.approx(
                1.0 - auc_roc(-scores, labels), abs=1e-12
            )

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_monotone_transform_invariant(self, seed):
        rng = np.random.default_rng(seed)
        scores = rng.standard_normal(12)
        labels = ["sister"] * 6 + ["random"] * 6
        base = auc_roc(scores, labels)
        assert auc_roc(np.exp(scores), labels) == pytest.approx(base, abs=1e-12)


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank
# ---------------------------------------------------------------------------


class TestWilcoxon:
    def test_all_greater_n10(self):
        a = np.arange(10, dtype=float) + 2.0
        b = np.arange(10, dtype=float)
        assert wilcoxon_one_sided(a, b) == pytest.approx(1 / 1024, abs=1e-15)

    def test_all_zero_differences_rejected(self):
        with pytest.raises(UndefinedStatisticError):
            wilcoxon_one_sided([1.0, 2.0], [1.0, 2.0])

    def test_matches_brute_force_enumeration(self):
        rng = np.random.default_rng(13)
        checked = 0
        while checked < 120:
            n = int(rng.integers(2, 13))
            a = rng.integers(0, 8, n).astype(float)
            b = rng.integers(0, 8, n).astype(float)
            if np.all(a == b):
                continue
            assert wilcoxon_one_sided(a, b) == pytest.approx(
                oracle_wilcoxon(a, b), abs=0.0
            ), (a, b)
            checked += 1

    def test_zero_differences_discarded(self):
        # pairs equal on some coordinates contribute nothing
        a = [5.0, 5.0, 3.0, 9.0, 1.0]
        b = [5.0, 5.0, 1.0, 4.0, 0.0]
        assert wilcoxon_one_sided(a, b) == pytest.approx(
            wilcoxon_one_sided([3.0, 9.0, 1.0], [1.0, 4.0, 0.0])
        )

    def test_normal_approximation_continuity(self):
        # exact and approximate p close around the switchover size
        rng = np.random.default_rng(3)
        a = rng.standard_normal(26) + 0.4
        b = rng.standard_normal(26)
        exact = wilcoxon_one_sided(a, b, exact_threshold=30)
        approx = wilcoxon_one_sided(a, b, exact_threshold=10)
        assert approx == pytest.approx(exact, abs=0.01)

    def test_null_distribution_roughly_uniform(self):
        rng = np.random.default_rng(21)
        ps = []
        for _ in range(400):
            a = rng.standard_normal(100)
            b = rng.standard_normal(100)
            ps.append(wilcoxon_one_sided(a, b))
        med = float(np.median(ps))
        assert 0.4 <= med <= 0.6, med


# ---------------------------------------------------------------------------
# Evaluation protocols
# ---------------------------------------------------------------------------


def fake_record(word):
    return SimpleNamespace(word=word)


class TestDirectEval:
    def test_oracle_predictor_scores_one(self):
        rng = np.random.default_rng(5)
        table = make_table("t", {f"w{i}": rng.standard_normal(8).tolist() for i in range(30)})
        records = [fake_record(f"w{i}") for i in range(30)]
        summary = direct_eval(lambda r: np.asarray(table.lookup(r.word)), records, table)
        assert summary.mean == pytest.approx(1.0, abs=1e-7)
        assert summary.std == pytest.approx(0.0, abs=1e-7)
        assert summary.n == 30 and summary.excluded == 0

    def test_fixed_random_vector_concentrates_near_zero(self):
        rng = np.random.default_rng(11)
        dim = 300
        table = make_table("t", {f"w{i}": rng.standard_normal(dim).tolist() for i in range(500)})
        probe = rng.standard_normal(dim)
        summary = direct_eval(lambda r: probe, [fake_record(f"w{i}") for i in range(500)], table)
        assert abs(summary.mean) < 0.05
        assert summary.std < 0.12

    def test_unusable_records_counted(self):
        table = make_table("t", {"a": [1.0, 0.0], "b": [0.0, 1.0]})

        def predict(rec):
            if rec.word == "b":
                raise UnusablePairError("no pair")
            return np.asarray([1.0, 1.0])

        summary = direct_eval(predict, [fake_record(w) for w in ("a", "b", "missing")], table)
        assert summary.n == 1 and summary.excluded == 2


def fake_list(pairs):
    return SimpleNamespace(pairs=pairs)


def fake_pair(w1_word, w2, sim):
    return SimpleNamespace(w1=fake_record(w1_word), w2=w2, sims={"res": sim})


class TestIndirectEval:
    def _table(self, dim=16, n=40, seed=4):
        rng = np.random.default_rng(seed)
        return make_table("t", {f"v{i}": rng.standard_normal(dim).tolist() for i in range(n)})

    def test_order_preserving_predictor_scores_one(self):
        table = self._table()
        lists = []
        for li in range(5):
            pairs = [fake_pair(f"x{li}_{i}", f"v{i}", sim=float(i)) for i in range(7)]
            lists.append(fake_list(pairs))
        rng = np.random.default_rng(9)
        probe = rng.standard_normal(16)

        def predict(rec):
            # construct a vector whose cosine with w2 is exactly (i+1)/10
            i = int(rec.word.split("_")[1])
            v = np.asarray(table.lookup(f"v{i}"), dtype=np.float64)
            v_hat = v / np.linalg.norm(v)
            perp = probe - (probe @ v_hat) * v_hat
            perp /= np.linalg.norm(perp)
            c = (i + 1) / 10.0
            return c * v_hat + math.sqrt(1 - c * c) * perp

        report = indirect_eval(predict, lists, table, "res")
        assert report.mean == pytest.approx(1.0)

    def test_shuffled_scores_average_near_zero(self):
        rng = np.random.default_rng(17)
        dim = 12
        table = make_table(
            "t", {f"v{i}": rng.standard_normal(dim).tolist() for i in range(7)}
        )
        vectors = {f"y{li}_{i}": rng.standard_normal(dim) for li in range(250) for i in range(7)}
        lists = [
            fake_list([fake_pair(f"y{li}_{i}", f"v{i}", sim=float(i)) for i in range(7)])
            for li in range(250)
        ]
        report = indirect_eval(lambda r: vectors[r.word], lists, table, "res")
        assert abs(report.mean) < 0.05
        assert len(report.rhos) == 250

    def test_unusable_list_dropped_and_counted(self):
        table = self._table()
        good = fake_list([fake_pair(f"a{i}", f"v{i}", float(i)) for i in range(7)])
        bad = fake_list([fake_pair("b0", "not-there", 0.0)])
        rng = np.random.default_rng(3)
        vecs = {f"a{i}": rng.standard_normal(16) for i in range(7)}
        report = indirect_eval(lambda r: vecs[r.word], [good, bad], table, "res")
        assert report.dropped_unusable == 1
        assert len(report.rhos) == 1
