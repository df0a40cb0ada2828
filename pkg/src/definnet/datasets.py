"""Dataset construction: definition corpus records, IV/OOV splits, word-pair
sets with sister-term sampling, and fixed-size lists for rank correlation.

On-disk formats are line-oriented and replayable: every file starts with a
'#' header carrying a JSON payload (format version, seed, source table name,
config hash), then one tab-separated record per line.  The corpus record
fields, in order: word, POS of the word, synset id, definition text,
bracketed parse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .defparse import DefPair, extract_pair, parse_ptb
from .denn import NONE_TAG, DennConfig, TrainExample
from .embed_store import EmbeddingTable
from .errors import DataError, FormatError
from .wordnet import WordNetGraph, ICTable, sister_synsets, word_similarity

CORPUS_FORMAT = 1
MEASURES = ("path", "wup", "res")
DEFAULT_DELTAS = {"path": 0.02, "wup": 0.02, "res": 0.1}


@dataclass
class WordRecord:
    word: str
    pos: str  # WordNet POS letter of the defined word: n v a r
    synset_id: str
    definition: str
    parse: str
    def_pair: DefPair | None = None

    def ensure_pair(self) -> DefPair:
        if self.def_pair is None:
            self.def_pair = extract_pair(parse_ptb(self.parse))
        return self.def_pair

    @property
    def pos_c(self) -> str:
        # target-word tag fed to the network: coarse Penn tag per WordNet POS
        return {"n": "NN", "v": "VB", "a": "JJ", "r": "RB"}[self.pos]


@dataclass
class WordPair:
    w1: WordRecord
    w2: str
    relation: str  # "sister" or "random"
    sims: dict[str, float] = field(default_factory=dict)


@dataclass
class PairList:
    pairs: list[WordPair]
    measure: str
    delta: float

    def __post_init__(self):
        vals = [p.sims[self.measure] for p in self.pairs]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if abs(vals[i] - vals[j]) < self.delta:
                    raise DataError(
                        f"list values {vals[i]} and {vals[j]} closer than delta={self.delta}"
                    )


# ---------------------------------------------------------------------------
# Corpus files
# ---------------------------------------------------------------------------


def write_header(fh, kind: str, meta: dict) -> None:
    payload = dict(meta)
    payload["kind"] = kind
    payload["format"] = CORPUS_FORMAT
    fh.write("# " + json.dumps(payload, sort_keys=True) + "\n")


def read_header(fh, kind: str) -> dict:
    line = fh.readline()
    if not line.startswith("# "):
        raise FormatError(f"missing header line, expected '# {{json}}' for {kind}")
    try:
        payload = json.loads(line[2:])
    except json.JSONDecodeError:
        raise FormatError("unparsable header JSON") from None
    if payload.get("kind") != kind:
        raise FormatError(f"header kind {payload.get('kind')!r}, expected {kind!r}")
    if payload.get("format") != CORPUS_FORMAT:
        raise FormatError(f"unsupported format version {payload.get('format')!r}")
    return payload


def write_corpus(records: list[WordRecord], path: str, meta: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_header(fh, "corpus", meta or {})
        for r in records:
            fh.write("\t".join((r.word, r.pos, r.synset_id, r.definition, r.parse)) + "\n")


def read_corpus(path: str, extract: bool = True) -> tuple[list[WordRecord], dict]:
    """Read a corpus file; with extract=True the definition pair is computed."""
    records = []
    with open(path, encoding="utf-8") as fh:
        meta = read_header(fh, "corpus")
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise FormatError(f"{path}:{lineno}: expected 5 tab-separated fields")
            rec = WordRecord(*parts)
            if extract:
                rec.ensure_pair()
            records.append(rec)
    return records, meta


def ingest_corpus(path: str, max_reject_fraction: float = 0.05) -> tuple[list[WordRecord], list[tuple[int, str]], dict]:
    """Validate a raw corpus file: parse every tree, extract every pair.

    Returns accepted records, rejects as (line number, reason), and the
    header.  Raises DataError when the reject fraction exceeds the threshold.
    """
    records = []
    rejects: list[tuple[int, str]] = []
    with open(path, encoding="utf-8") as fh:
        meta = read_header(fh, "corpus")
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                rejects.append((lineno, "expected 5 tab-separated fields"))
                continue
            rec = WordRecord(*parts)
            try:
                rec.ensure_pair()
            except FormatError as exc:
                rejects.append((lineno, str(exc)))
                continue
            records.append(rec)
    total = len(records) + len(rejects)
    if total and len(rejects) / total > max_reject_fraction:
        raise DataError(
            f"{len(rejects)}/{total} records rejected, above threshold "
            f"{max_reject_fraction:.0%}"
        )
    return records, rejects, meta


# ---------------------------------------------------------------------------
# IV/OOV split and train/test sets
# ---------------------------------------------------------------------------


def eligible_lemma(lemma: str) -> bool:
    # embedding tokens are single lowercase words; multiword lemmas keep '_'
    return lemma.isalpha() and lemma == lemma.lower()


def split_iv_oov(
    graph: WordNetGraph,
    table: EmbeddingTable,
    require_example: bool = False,
    pos_filter: tuple[str, ...] = ("n", "v"),
) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """Partition single-token WordNet lemmas by membership in `table`.

    Returns sorted (lemma, pos) lists: in-vocabulary first, out-of-vocabulary
    second.  With require_example, only lemmas whose first synset carries a
    usage example are kept.
    """
    iv, oov = [], []
    for (lemma, pos), sids in graph.lemma_index.items():
        if pos not in pos_filter or not eligible_lemma(lemma):
            continue
        if require_example and not graph.synsets[sids[0]].examples:
            continue
        (iv if lemma in table else oov).append((lemma, pos))
    return sorted(iv), sorted(oov)


def build_direct_sets(
    records: list[WordRecord], split_ratio: float = 0.8, seed: int = 0
) -> tuple[list[WordRecord], list[WordRecord]]:
    """Seeded word-level split of eligible records into train and test sets.

    All records of one word land on the same side, so the sets are disjoint
    at the word level.
    """
    if not records:
        raise DataError("no eligible records to split")
    if not (0.0 < split_ratio < 1.0):
        raise ValueError("split_ratio must be in (0, 1)")
    words = sorted({r.word for r in records})
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(words))
    n_train = round(len(words) * split_ratio)
    train_words = {words[i] for i in order[:n_train]}
    train = [r for r in records if r.word in train_words]
    test = [r for r in records if r.word not in train_words]
    return train, test


# ---------------------------------------------------------------------------
# Pair sets and correlation lists
# ---------------------------------------------------------------------------


def _iv_sister_lemmas(
    graph: WordNetGraph, record: WordRecord, iv_lookup: set[tuple[str, str]]
) -> list[str]:
    """In-vocabulary single-token lemmas of sister synsets of the first sense."""
    syn = graph.synsets.get(record.synset_id)
    if syn is None:
        syns = graph.synsets_for(record.word, record.pos)
        syn = syns[0] if syns else None
    if syn is None:
        return []
    out = set()
    for sister in sister_synsets(graph, syn):
        for lemma in sister.lemmas:
            lem = lemma.lower()
            if lem != record.word and eligible_lemma(lem) and (lem, record.pos) in iv_lookup:
                out.add(lem)
    return sorted(out)


def build_pairs(
    w1_records: list[WordRecord],
    iv_words: list[tuple[str, str]],
    graph: WordNetGraph,
    count: int,
    seed: int = 0,
    ic: ICTable | None = None,
    ic_by_pos: dict[str, ICTable] | None = None,
) -> tuple[list[WordPair], list[str]]:
    """Sample `count` word pairs: half sister relations, half random words.

    w1 comes from `w1_records`; w2 is an in-vocabulary word of the same POS,
    drawn uniformly from the sister lemmas of w1's synset (sister half) or
    from all IV words (random half).  All three taxonomy similarities are
    precomputed on each pair; w1 candidates with no usable sister or with an
    undefined similarity are skipped and logged.
    """
    if not w1_records or not iv_words:
        raise DataError("empty word sets")
    rng = np.random.default_rng(seed)
    skipped: list[str] = []
    iv_lookup = set(iv_words)
    iv_by_pos: dict[str, list[str]] = {}
    for lemma, pos in iv_words:
        iv_by_pos.setdefault(pos, []).append(lemma)
    for pos in iv_by_pos:
        iv_by_pos[pos].sort()

    n_sister = (count + 1) // 2
    n_random = count - n_sister
    order = rng.permutation(len(w1_records))
    pairs: list[WordPair] = []

    def sims_for(rec: WordRecord, w2: str) -> dict[str, float] | None:
        table = None
        if ic_by_pos is not None:
            table = ic_by_pos.get(rec.pos)
        if table is None:
            table = ic
        out = {}
        for m in MEASURES:
            val = word_similarity(graph, rec.word, w2, rec.pos, m, ic=table)
            if val is None:
                return None
            out[m] = val
        return out

    random_pool: list[WordRecord] = []
    cursor = 0
    while cursor < len(order) and len(pairs) < n_sister:
        rec = w1_records[order[cursor]]
        cursor += 1
        candidates = _iv_sister_lemmas(graph, rec, iv_lookup)
        if not candidates:
            skipped.append(f"{rec.word}/{rec.pos}: no in-vocabulary sister")
            random_pool.append(rec)
            continue
        w2 = candidates[int(rng.integers(len(candidates)))]
        sims = sims_for(rec, w2)
        if sims is None:
            skipped.append(f"{rec.word}/{rec.pos}: undefined similarity vs {w2}")
            random_pool.append(rec)
            continue
        pairs.append(WordPair(rec, w2, "sister", sims))
    if len(pairs) < n_sister:
        raise DataError(f"only {len(pairs)} sister pairs available, needed {n_sister}")
    random_pool.extend(w1_records[order[i]] for i in range(cursor, len(order)))

    n_built_random = 0
    for rec in random_pool:
        if n_built_random >= n_random:
            break
        pool = [w for w in iv_by_pos.get(rec.pos, []) if w != rec.word]
        if not pool:
            skipped.append(f"{rec.word}/{rec.pos}: no same-POS IV words")
            continue
        w2 = pool[int(rng.integers(len(pool)))]
        sims = sims_for(rec, w2)
        if sims is None:
            skipped.append(f"{rec.word}/{rec.pos}: undefined similarity vs {w2}")
            continue
        pairs.append(WordPair(rec, w2, "random", sims))
        n_built_random += 1
    if n_built_random < n_random:
        raise DataError(f"only {n_built_random} random pairs available, needed {n_random}")
    return pairs, skipped


def build_lists(
    pairs: list[WordPair],
    measure: str,
    list_size: int = 7,
    delta: float | None = None,
    seed: int = 0,
) -> tuple[list[PairList], list[WordPair]]:
    """Greedy seeded assembly of lists with pairwise well-separated values.

    Each list holds `list_size` pairs whose values under `measure` differ by
    at least `delta` from one another; no pair is reused.  Returns the lists
    and the leftover pairs that fit nowhere.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if delta is None:
        delta = DEFAULT_DELTAS[measure]
    if len(pairs) < list_size:
        raise DataError(f"{len(pairs)} pairs cannot form a list of {list_size}")
    rng = np.random.default_rng(seed)
    pool = [pairs[i] for i in rng.permutation(len(pairs))]
    lists: list[PairList] = []
    while True:
        chosen: list[WordPair] = []
        chosen_vals: list[float] = []
        rest: list[WordPair] = []
        for p in pool:
            v = p.sims[measure]
            if len(chosen) < list_size and all(abs(v - cv) >= delta for cv in chosen_vals):
                chosen.append(p)
                chosen_vals.append(v)
            else:
                rest.append(p)
        if len(chosen) < list_size:
            leftovers = chosen + rest
            break
        lists.append(PairList(chosen, measure, delta))
        pool = rest
    return lists, leftovers


# ---------------------------------------------------------------------------
# Pair/list files
# ---------------------------------------------------------------------------

_PAIR_FIELDS = ("word", "pos", "synset_id", "definition", "parse", "w2", "relation",
                "path", "wup", "res", "list_index")


def write_pairs(pairs: list[WordPair], path: str, meta: dict | None = None,
                list_index: list[int] | None = None) -> None:
    idx = list_index if list_index is not None else [-1] * len(pairs)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_header(fh, "pairs", meta or {})
        for p, li in zip(pairs, idx):
            r = p.w1
            fh.write("\t".join((
                r.word, r.pos, r.synset_id, r.definition, r.parse,
                p.w2, p.relation,
                repr(p.sims["path"]), repr(p.sims["wup"]), repr(p.sims["res"]),
                str(li),
            )) + "\n")


def read_pairs(path: str) -> tuple[list[WordPair], list[int], dict]:
    pairs: list[WordPair] = []
    list_index: list[int] = []
    with open(path, encoding="utf-8") as fh:
        meta = read_header(fh, "pairs")
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != len(_PAIR_FIELDS):
                raise FormatError(f"{path}:{lineno}: expected {len(_PAIR_FIELDS)} fields")
            rec = WordRecord(*parts[:5])
            sims = {"path": float(parts[7]), "wup": float(parts[8]), "res": float(parts[9])}
            pairs.append(WordPair(rec, parts[5], parts[6], sims))
            list_index.append(int(parts[10]))
    return pairs, list_index, meta


def write_lists(lists: list[PairList], path: str, meta: dict | None = None) -> None:
    meta = dict(meta or {})
    if lists:
        meta.update(measure=lists[0].measure, delta=lists[0].delta)
    flat: list[WordPair] = []
    idx: list[int] = []
    for i, plist in enumerate(lists):
        flat.extend(plist.pairs)
        idx.extend([i] * len(plist.pairs))
    write_pairs(flat, path, meta, idx)


def read_lists(path: str) -> tuple[list[PairList], dict]:
    pairs, idx, meta = read_pairs(path)
    measure = meta.get("measure")
    delta = float(meta.get("delta", 0.0))
    if measure not in MEASURES:
        raise FormatError(f"{path}: header lacks a valid measure")
    grouped: dict[int, list[WordPair]] = {}
    for p, i in zip(pairs, idx):
        grouped.setdefault(i, []).append(p)
    lists = [PairList(grouped[i], measure, delta) for i in sorted(grouped)]
    return lists, meta


# ---------------------------------------------------------------------------
# Training examples
# ---------------------------------------------------------------------------


def pos_vocab_from_records(records: list[WordRecord]) -> tuple[str, ...]:
    tags = {NONE_TAG}
    for r in records:
        pair = r.ensure_pair()
        tags.add(pair.pos_h)
        if pair.pos_m is not None:
            tags.add(pair.pos_m)
        tags.add(r.pos_c)
    return tuple(sorted(tags))


def to_train_examples(
    records: list[WordRecord], table: EmbeddingTable, config: DennConfig
) -> tuple[list[TrainExample], int]:
    """Turn corpus records into training examples against `table`.

    Records whose target word or super-type word is missing from the table
    are skipped; the skip count is returned.
    """
    examples: list[TrainExample] = []
    skipped = 0
    zero_m = np.zeros(config.dim, dtype=np.float32)
    for rec in records:
        pair = rec.ensure_pair()
        target = table.lookup(rec.word)
        vec_h = table.lookup(pair.w_h)
        if vec_h is None:
            vec_h = table.lookup(pair.w_h.lower())
        if target is None or vec_h is None or not np.any(target):
            skipped += 1
            continue
        if pair.w_m is not None:
            vec_m = table.lookup(pair.w_m)
            if vec_m is None:
                vec_m = table.lookup(pair.w_m.lower())
        else:
            vec_m = None
        if vec_m is None:
            vec_m, pos_m = zero_m, config.pos_index(NONE_TAG)
        else:
            pos_m = config.pos_index(pair.pos_m)
        examples.append(
            TrainExample(
                vec_h=vec_h,
                vec_m=vec_m,
                pos_h=config.pos_index(pair.pos_h),
                pos_m=pos_m,
                pos_c=config.pos_index(rec.pos_c),
                target=target,
            )
        )
    return examples, skipped
