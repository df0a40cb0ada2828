import math
import shutil

import pytest

from definnet.errors import DataError, FormatError, NotInWordNetError, TaxonomyError
from definnet.wordnet import (
    ICTable,
    build_graph,
    first_iv_hypernym,
    intrinsic_ic,
    lcs,
    load_ic_file,
    load_wordnet,
    path_sim,
    res_sim,
    save_wordnet,
    sister_synsets,
    word_similarity,
    wup_sim,
)

from conftest import make_table


def by_lemma(graph, lemma, pos="n"):
    return graph.synsets_for(lemma, pos)[0]


# ---------------------------------------------------------------------------
# Independent oracle: exhaustive enumeration of hypernym paths
# ---------------------------------------------------------------------------


def all_paths_to_root(graph, s):
    if not s.hypernyms:
        return [[s.id]]
    paths = []
    for hid in s.hypernyms:
        for p in all_paths_to_root(graph, graph.synsets[hid]):
            paths.append([s.id] + p)
    return paths


def oracle_depth(graph, s, virtual=False):
    d = min(len(p) for p in all_paths_to_root(graph, s))
    return d + 1 if virtual else d


def oracle_anc_dist(graph, s):
    dist = {}
    for p in all_paths_to_root(graph, s):
        for i, sid in enumerate(p):
            if sid not in dist or i < dist[sid]:
                dist[sid] = i
    return dist


def oracle_root_dist(graph, s):
    return min(len(p) - 1 for p in all_paths_to_root(graph, s))


def oracle_lcs(graph, a, b):
    da, db = oracle_anc_dist(graph, a), oracle_anc_dist(graph, b)
    common = set(da) & set(db)
    if not common:
        return None
    ranked = sorted(common, key=lambda sid: (-oracle_depth(graph, graph.synsets[sid]), sid))
    return graph.synsets[ranked[0]]


def oracle_path(graph, a, b, virtual):
    da, db = oracle_anc_dist(graph, a), oracle_anc_dist(graph, b)
    cands = [da[c] + db[c] for c in set(da) & set(db)]
    if virtual:
        cands.append(oracle_root_dist(graph, a) + oracle_root_dist(graph, b) + 2)
    if not cands:
        return None
    return 1.0 / (1.0 + min(cands))


def oracle_wup(graph, a, b, virtual):
    anc = oracle_lcs(graph, a, b)
    if anc is None and not virtual:
        return None
    top = 1 if anc is None else oracle_depth(graph, anc, virtual)
    return 2.0 * top / (oracle_depth(graph, a, virtual) + oracle_depth(graph, b, virtual))


def oracle_descendants(graph, s):
    out = set()

    def walk(sid):
        for hid in graph.synsets[sid].hyponyms:
            if hid not in out:
                out.add(hid)
                walk(hid)

    walk(s.id)
    return out


def oracle_ic(graph, pos):
    total = sum(1 for x in graph.synsets.values() if x.pos == pos)
    return {
        sid: -math.log((len(oracle_descendants(graph, syn)) + 1) / total)
        for sid, syn in graph.synsets.items()
        if syn.pos == pos
    }


# ---------------------------------------------------------------------------
# Loader
# ---------------------------------------------------------------------------


class TestLoad:
    def test_fixture_counts(self, mini_graph):
        assert mini_graph.count("n") == 32
        assert mini_graph.count("v") == 7
        assert mini_graph.count("a") == 2
        assert mini_graph.count("r") == 1
        assert len(mini_graph.synsets) == 42

    def test_gloss_and_examples_split(self, mini_graph):
        s = by_lemma(mini_graph, "feeling")
        assert s.gloss == "the experiencing of affective states"
        assert s.examples == ["she had a feeling of euphoria"]

    def test_edges_mutually_consistent(self, mini_graph):
        for sid, syn in mini_graph.synsets.items():
            for hid in syn.hypernyms:
                assert sid in mini_graph.synsets[hid].hyponyms
            for hid in syn.hyponyms:
                assert sid in mini_graph.synsets[hid].hypernyms

    def test_lemma_index_points_at_existing(self, mini_graph):
        for (lemma, pos), sids in mini_graph.lemma_index.items():
            for sid in sids:
                assert sid in mini_graph.synsets
                assert mini_graph.synsets[sid].pos == pos

    def test_missing_index_verb(self, mini_wordnet_dir, tmp_path):
        broken = tmp_path / "wn"
        shutil.copytree(mini_wordnet_dir, broken)
        (broken / "index.verb").unlink()
        with pytest.raises(DataError, match="index.verb"):
            load_wordnet(broken)

    def test_malformed_offset(self, mini_wordnet_dir, tmp_path):
        broken = tmp_path / "wn"
        shutil.copytree(mini_wordnet_dir, broken)
        data = (broken / "data.adv").read_text().splitlines(keepends=True)
        data[1] = "99999999" + data[1][8:]
        (broken / "data.adv").write_text("".join(data))
        with pytest.raises(FormatError, match="offset"):
            load_wordnet(broken)

    def test_save_load_structure_roundtrip(self, mini_graph, tmp_path):
        out = tmp_path / "rt"
        save_wordnet(mini_graph, out)
        again = load_wordnet(out)
        assert len(again.synsets) == len(mini_graph.synsets)

        def shape(g):
            return sorted(
                (tuple(s.lemmas), s.pos, s.gloss, tuple(s.examples),
                 tuple(sorted(tuple(g.synsets[h].lemmas) for h in s.hypernyms)))
                for s in g.synsets.values()
            )

        assert shape(again) == shape(mini_graph)

    def test_cycle_detected(self):
        with pytest.raises(FormatError, match="cycle"):
            g = build_graph(
                [
                    {"id": "00000001n", "pos": "n", "lemmas": ["a"], "gloss": ""},
                    {"id": "00000002n", "pos": "n", "lemmas": ["b"], "gloss": "",
                     "hypernyms": ["00000001n"]},
                ]
            )
            g.synsets["00000001n"].hypernyms.append("00000002n")
            from definnet.wordnet import _check_acyclic

            _check_acyclic(g.synsets)


# ---------------------------------------------------------------------------
# Measures on the toy fixture (hand-computed values)
# ---------------------------------------------------------------------------


class TestToyMeasures:
    def test_lcs_self(self, toy_graph):
        s = by_lemma(toy_graph, "alphaone")
        assert lcs(toy_graph, s, s) is s

    def test_lcs_ancestor(self, toy_graph):
        child = by_lemma(toy_graph, "alphaone")
        parent = by_lemma(toy_graph, "alpha")
        assert lcs(toy_graph, child, parent) is parent

    def test_lcs_siblings(self, toy_graph):
        a1 = by_lemma(toy_graph, "alphaone")
        a2 = by_lemma(toy_graph, "alphatwo")
        assert lcs(toy_graph, a1, a2) is by_lemma(toy_graph, "alpha")

    def test_path_self(self, toy_graph):
        s = by_lemma(toy_graph, "alpha")
        assert path_sim(toy_graph, s, s) == 1.0

    def test_path_parent_child(self, toy_graph):
        assert path_sim(
            toy_graph, by_lemma(toy_graph, "alphaone"), by_lemma(toy_graph, "alpha")
        ) == 0.5

    def test_path_siblings(self, toy_graph):
        assert path_sim(
            toy_graph, by_lemma(toy_graph, "alphaone"), by_lemma(toy_graph, "alphatwo")
        ) == pytest.approx(1 / 3)

    def test_wup_self(self, toy_graph):
        s = by_lemma(toy_graph, "alphatwo")
        assert wup_sim(toy_graph, s, s) == 1.0

    def test_wup_siblings(self, toy_graph):
        assert wup_sim(
            toy_graph, by_lemma(toy_graph, "alphaone"), by_lemma(toy_graph, "alphatwo")
        ) == pytest.approx(2 * 2 / (3 + 3))

    def test_wup_parent_child(self, toy_graph):
        assert wup_sim(
            toy_graph, by_lemma(toy_graph, "alpha"), by_lemma(toy_graph, "alphaone")
        ) == pytest.approx(2 * 2 / (2 + 3))

    def test_res_root_is_zero(self, toy_graph):
        ic = intrinsic_ic(toy_graph, "n")
        root = by_lemma(toy_graph, "root")
        for other in ("alpha", "alphaone", "beta"):
            assert res_sim(toy_graph, ic, root, by_lemma(toy_graph, other)) == 0.0

    def test_res_sibling_value(self, toy_graph):
        # lcs(alphaone, alphatwo) = alpha; 2 descendants + 1 over 5 synsets
        ic = intrinsic_ic(toy_graph, "n")
        got = res_sim(
            toy_graph, ic, by_lemma(toy_graph, "alphaone"), by_lemma(toy_graph, "alphatwo")
        )
        assert got == pytest.approx(-math.log(3 / 5), abs=1e-12)

    def test_res_self_is_own_ic(self, toy_graph):
        ic = intrinsic_ic(toy_graph, "n")
        s = by_lemma(toy_graph, "alphaone")
        assert res_sim(toy_graph, ic, s, s) == pytest.approx(ic[s.id])

    def test_pos_mismatch_rejected(self, mini_graph):
        with pytest.raises(TaxonomyError):
            path_sim(mini_graph, by_lemma(mini_graph, "dog"), by_lemma(mini_graph, "move", "v"))


# ---------------------------------------------------------------------------
# Full oracle sweep over the mini fixture
# ---------------------------------------------------------------------------


class TestOracleSweep:
    @pytest.mark.parametrize("pos,virtual", [("n", False), ("v", True)])
    def test_measures_match_oracle_on_every_pair(self, mini_graph, pos, virtual):
        syns = sorted(
            (s for s in mini_graph.synsets.values() if s.pos == pos), key=lambda s: s.id
        )
        ic = intrinsic_ic(mini_graph, pos)
        oracle_ics = oracle_ic(mini_graph, pos)
        for a in syns:
            for b in syns:
                want = oracle_path(mini_graph, a, b, virtual)
                assert path_sim(mini_graph, a, b, virtual) == pytest.approx(want, abs=1e-12)
                want = oracle_wup(mini_graph, a, b, virtual)
                assert wup_sim(mini_graph, a, b, virtual) == pytest.approx(want, abs=1e-12)
                anc = oracle_lcs(mini_graph, a, b)
                want = 0.0 if anc is None else oracle_ics[anc.id]
                assert res_sim(mini_graph, ic, a, b, virtual) == pytest.approx(want, abs=1e-12)

    def test_symmetry_and_identity(self, mini_graph):
        syns = [s for s in mini_graph.synsets.values() if s.pos == "n"]
        ic = intrinsic_ic(mini_graph, "n")
        for a in syns[:10]:
            assert path_sim(mini_graph, a, a) == 1.0
            assert wup_sim(mini_graph, a, a) == 1.0
            assert res_sim(mini_graph, ic, a, a) == pytest.approx(ic[a.id])
            for b in syns[:10]:
                assert path_sim(mini_graph, a, b) == path_sim(mini_graph, b, a)
                assert wup_sim(mini_graph, a, b) == wup_sim(mini_graph, b, a)

    def test_ic_monotone_along_edges(self, mini_graph):
        for pos in ("n", "v"):
            ic = intrinsic_ic(mini_graph, pos)
            for s in mini_graph.synsets.values():
                if s.pos != pos:
                    continue
                for hid in s.hypernyms:
                    assert ic[hid] <= ic[s.id] + 1e-12

    def test_verbs_without_virtual_root_error(self, mini_graph):
        a = by_lemma(mini_graph, "drive", "v")
        b = by_lemma(mini_graph, "deforest", "v")
        with pytest.raises(TaxonomyError):
            path_sim(mini_graph, a, b, simulate_root=False)
        assert path_sim(mini_graph, a, b) == pytest.approx(
            oracle_path(mini_graph, a, b, True)
        )


# ---------------------------------------------------------------------------
# Sisters and hypernym lookup
# ---------------------------------------------------------------------------


class TestSisters:
    def test_toy_sisters(self, toy_graph):
        sisters = sister_synsets(toy_graph, by_lemma(toy_graph, "alphaone"))
        assert [s.lemmas[0] for s in sisters] == ["alphatwo"]

    def test_root_has_no_sisters(self, toy_graph):
        assert sister_synsets(toy_graph, by_lemma(toy_graph, "root")) == []

    def test_two_hypernyms_union_deduplicated(self, mini_graph):
        hovercraft = by_lemma(mini_graph, "hovercraft")
        names = {s.lemmas[0] for s in sister_synsets(mini_graph, hovercraft)}
        assert names == {"boat", "machine"}

    def test_never_contains_self(self, mini_graph):
        for s in mini_graph.synsets.values():
            assert s.id not in {x.id for x in sister_synsets(mini_graph, s)}


class TestFirstIvHypernym:
    def test_direct_hypernym(self, mini_graph):
        table = make_table("t", {"sadness": [1.0, 0.0]})
        lemma, vec = first_iv_hypernym(mini_graph, "cheerlessness", "n", table)
        assert lemma == "sadness"

    def test_walks_past_oov_parent(self, mini_graph):
        table = make_table("t", {"feeling": [1.0, 0.0]})
        lemma, vec = first_iv_hypernym(mini_graph, "cheerlessness", "n", table)
        assert lemma == "feeling"

    def test_not_in_wordnet(self, mini_graph, small_table):
        with pytest.raises(NotInWordNetError):
            first_iv_hypernym(mini_graph, "zzzz", "n", small_table)

    def test_no_iv_ancestor(self, mini_graph):
        table = make_table("t", {"unrelated": [1.0]})
        with pytest.raises(DataError):
            first_iv_hypernym(mini_graph, "cheerlessness", "n", table)


class TestWordSimilarity:
    def test_max_over_senses(self, mini_graph):
        got = word_similarity(mini_graph, "cheerlessness", "depression", "n", "path")
        assert got == pytest.approx(1 / 3)

    def test_unknown_word_is_none(self, mini_graph):
        assert word_similarity(mini_graph, "qqq", "dog", "n", "path") is None

    def test_res_needs_ic(self, mini_graph):
        with pytest.raises(ValueError):
            word_similarity(mini_graph, "dog", "cat", "n", "res")


class TestIcFile:
    def test_corpus_counts(self, toy_graph, tmp_path):
        # counts: root 100 (total), alpha 50, alphaone 20, alphatwo 10, beta 30
        p = tmp_path / "ic.dat"
        ids = {s.lemmas[0]: s.id for s in toy_graph.synsets.values()}
        lines = [
            f"{ids['root'][:8]}n 100",
            f"{ids['alpha'][:8]}n 50",
            f"{ids['alphaone'][:8]}n 20",
            f"{ids['alphatwo'][:8]}n 10",
            f"{ids['beta'][:8]}n 30",
        ]
        p.write_text("\n".join(lines) + "\n")
        ic = load_ic_file(p, toy_graph)
        assert ic[ids["root"]] == pytest.approx(0.0)
        assert ic[ids["alpha"]] == pytest.approx(-math.log(0.5))

    def test_missing_entry_raises(self, toy_graph):
        ic = ICTable(values={}, method="corpus_file")
        with pytest.raises(DataError):
            ic["00000001n"]
