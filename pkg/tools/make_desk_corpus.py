#!/usr/bin/env python3
"""Generate the bundled desk-scale corpus: a synthetic taxonomy with
embeddings, definitions, parses, and an n-gram table.

World model: every concept's vector is built from its parent's vector and a
modifier word's vector through two fixed mixing maps plus isotropic noise,
then normalized.  Definitions name exactly that parent (super-type) and
modifier, so a trained composition network can recover the mixing maps while
plain addition or hypernym lookup cannot.  Lemma strings partially inherit
syllables from the parent, giving character n-grams a real but weaker
signal.  Outputs under fixtures/desk/:

    wordnet/            WordNet-format taxonomy (data.* / index.*)
    corpus.tsv          word, POS, synset id, definition, parse
    embeddings.bin      in-vocabulary word vectors (binary format)
    ngrams.bin          character 3-gram table averaged from IV words
    oov_words.txt       held-out words (absent from embeddings.bin)
"""

import os
import sys
from collections import defaultdict

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from definnet.datasets import WordRecord, write_corpus
from definnet.defparse import extract_pair, parse_ptb
from definnet.embed_store import EmbeddingTable, ngram_windows, save_embeddings
from definnet.wordnet import build_graph, load_wordnet, save_wordnet

DIM = 64
N_NOUNS = 4600
N_VERBS = 1400
NOUN_ROOTS = 1
VERB_ROOTS = 3
MAX_CHILDREN = 8
OOV_LEAF_FRACTION = 0.28
SEED = 20240817

# composition constants: identity share of the two mixing maps and the norm
# of the per-concept noise vector (signal terms have norm ~1 each)
LAMBDA_HEAD = 0.45
LAMBDA_MOD = 0.20
NOISE = 1.0

CONSONANTS = "bdfgklmnprstvz"
VOWELS = "aeiou"
ADJECTIVES = ["small", "large", "common", "rare", "pale", "dense", "hollow", "broad"]

NOUN_TEMPLATES = [
    ("a {h} of {m}",
     "(ROOT (NP (NP (DT a) (NN {h})) (PP (IN of) (NP (NN {m})))))"),
    ("a {h} with {m}",
     "(ROOT (NP (NP (DT a) (NN {h})) (PP (IN with) (NP (NN {m})))))"),
    ("a {a} {h} of {m}",
     "(ROOT (NP (NP (DT a) (JJ {a}) (NN {h})) (PP (IN of) (NP (NN {m})))))"),
    ("a {h} for {m}",
     "(ROOT (NP (NP (DT a) (NN {h})) (PP (IN for) (NP (NN {m})))))"),
]
VERB_TEMPLATES = [
    ("{h} the {m}",
     "(ROOT (S (VP (VB {h}) (NP (DT the) (NN {m})))))"),
    ("{h} {m} from",
     "(ROOT (S (VP (VB {h}) (NP (NN {m})) (PP (IN from)))))"),
]


def mixing_map(rng, lam):
    q, _ = np.linalg.qr(rng.standard_normal((DIM, DIM)))
    return lam * np.eye(DIM) + np.sqrt(1.0 - lam * lam) * q


def syllable(rng):
    return CONSONANTS[rng.integers(len(CONSONANTS))] + VOWELS[rng.integers(len(VOWELS))]


def make_name(rng, parent_name, taken):
    for _ in range(64):
        parts = []
        if parent_name is not None and rng.random() < 0.55:
            # inherit a syllable chunk from the parent (morphological family)
            k = 2 * int(rng.integers(1, min(3, len(parent_name) // 2) + 1))
            start = int(rng.integers(0, max(1, len(parent_name) - k + 1)))
            parts.append(parent_name[start : start + k])
        n_own = int(rng.integers(1, 4)) + (0 if parts else 1)
        parts.extend(syllable(rng) for _ in range(n_own))
        name = "".join(parts)
        if 4 <= len(name) <= 14 and name not in taken:
            taken.add(name)
            return name
    raise RuntimeError("name space exhausted")


class Node:
    __slots__ = ("idx", "pos", "name", "parent", "depth", "latent", "mod", "template")

    def __init__(self, idx, pos, name, parent, depth):
        self.idx = idx
        self.pos = pos
        self.name = name
        self.parent = parent
        self.depth = depth
        self.latent = None
        self.mod = None
        self.template = None


def grow_taxonomy(rng, pos, count, n_roots, taken):
    nodes = []
    for _ in range(n_roots):
        nodes.append(Node(len(nodes), pos, make_name(rng, None, taken), None, 1))
    while len(nodes) < count:
        # bias attachment toward shallow nodes so depth stays moderate
        weights = np.array([1.0 / (1.0 + n.depth) for n in nodes])
        weights /= weights.sum()
        parent = nodes[int(rng.choice(len(nodes), p=weights))]
        children = sum(1 for n in nodes if n.parent is parent)
        if children >= MAX_CHILDREN or parent.depth >= 9:
            continue
        nodes.append(
            Node(len(nodes), pos, make_name(rng, parent.name, taken), parent,
                 parent.depth + 1)
        )
    return nodes


def main():
    rng = np.random.default_rng(SEED)
    root = os.path.join(os.path.dirname(__file__), "..")
    out_dir = os.path.join(root, "fixtures", "desk")
    os.makedirs(out_dir, exist_ok=True)

    taken = set(ADJECTIVES)
    nouns = grow_taxonomy(rng, "n", N_NOUNS, NOUN_ROOTS, taken)
    verbs = grow_taxonomy(rng, "v", N_VERBS, VERB_ROOTS, taken)
    all_nodes = nouns + verbs

    A = mixing_map(rng, LAMBDA_HEAD)
    B = mixing_map(rng, LAMBDA_MOD)

    # latents in topological (creation) order; the modifier of a node is a
    # uniformly chosen earlier noun (verbs also take noun modifiers)
    noun_pool = []
    for node in all_nodes:
        if node.parent is None:
            u = rng.standard_normal(DIM)
            node.latent = u / np.linalg.norm(u)
        else:
            mod_src = noun_pool[int(rng.integers(len(noun_pool)))] if noun_pool else node.parent
            node.mod = mod_src
            g = rng.standard_normal(DIM)
            u = (
                A @ node.parent.latent
                + B @ mod_src.latent
                + NOISE * g / np.linalg.norm(g)
            )
            node.latent = u / np.linalg.norm(u)
        if node.pos == "n":
            noun_pool.append(node)
        node.template = int(rng.integers(len(NOUN_TEMPLATES if node.pos == "n" else VERB_TEMPLATES)))

    # held-out words: leaves whose parent stays in vocabulary
    children_of = defaultdict(list)
    for n in all_nodes:
        if n.parent is not None:
            children_of[n.parent.idx, n.parent.pos].append(n)
    leaves = [n for n in all_nodes if not children_of[n.idx, n.pos] and n.parent is not None]
    rng.shuffle(leaves)
    n_oov = int(len(leaves) * OOV_LEAF_FRACTION)
    oov = set()
    for n in leaves:
        if len(oov) >= n_oov:
            break
        oov.add((n.name, n.pos))

    # embedding table over IV words
    entries = {}
    for n in all_nodes:
        if (n.name, n.pos) not in oov:
            entries[n.name] = n.latent.astype(np.float32)
    table = EmbeddingTable.from_entries("desk", DIM, entries)
    save_embeddings(table, os.path.join(out_dir, "embeddings.bin"), "binary")

    # character 3-gram table: mean of the vectors of IV words containing each gram
    sums = defaultdict(lambda: np.zeros(DIM))
    counts = defaultdict(int)
    for name, vec in entries.items():
        for g in ngram_windows(name, 3):
            sums[g] += vec
            counts[g] += 1
    ngram_entries = {g: (sums[g] / counts[g]).astype(np.float32) for g in sorted(sums)}
    ngram_table = EmbeddingTable.from_entries("desk-3gram", DIM, ngram_entries)
    save_embeddings(ngram_table, os.path.join(out_dir, "ngrams.bin"), "binary")

    # taxonomy in database format
    graph_entries = []
    sid = {}
    for i, n in enumerate(all_nodes):
        sid[(n.idx, n.pos)] = f"{i + 1:08d}{n.pos}"
    for n in all_nodes:
        hypers = [sid[(n.parent.idx, n.parent.pos)]] if n.parent is not None else []
        graph_entries.append({
            "id": sid[(n.idx, n.pos)],
            "pos": n.pos,
            "lemmas": [n.name],
            "gloss": definition_text(n),
            "hypernyms": hypers,
        })
    graph = build_graph(graph_entries)
    id_map = save_wordnet(graph, os.path.join(out_dir, "wordnet"))

    # definition corpus with parses; verify the extractor recovers the pair
    records = []
    for n in all_nodes:
        if n.parent is None:
            continue
        gloss, parse = render(n)
        rec = WordRecord(n.name, n.pos, id_map[sid[(n.idx, n.pos)]], gloss, parse)
        pair = extract_pair(parse_ptb(parse))
        assert pair.w_h == n.parent.name and pair.w_m == n.mod.name, (gloss, pair)
        records.append(rec)
    records.sort(key=lambda r: (r.pos, r.synset_id))
    write_corpus(records, os.path.join(out_dir, "corpus.tsv"),
                 {"source": "desk", "seed": SEED})

    with open(os.path.join(out_dir, "oov_words.txt"), "w", encoding="utf-8") as fh:
        for name, pos in sorted(oov):
            fh.write(f"{name}\t{pos}\n")

    reloaded = load_wordnet(os.path.join(out_dir, "wordnet"))
    print(f"nouns={reloaded.count('n')} verbs={reloaded.count('v')}")
    print(f"IV words={len(entries)} OOV words={len(oov)} records={len(records)}")
    print(f"ngram table={len(ngram_entries)} grams")


def definition_text(n):
    if n.parent is None:
        return "a basic concept"
    return render(n)[0]


def render(n):
    templates = NOUN_TEMPLATES if n.pos == "n" else VERB_TEMPLATES
    gloss_t, parse_t = templates[n.template]
    adj = ADJECTIVES[(n.idx * 7 + len(n.name)) % len(ADJECTIVES)]
    fields = {"h": n.parent.name, "m": n.mod.name, "a": adj}
    return gloss_t.format(**fields), parse_t.format(**fields)


if __name__ == "__main__":
    main()
