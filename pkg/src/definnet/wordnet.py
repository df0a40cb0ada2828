"""WordNet 3.0 database access and taxonomy similarity measures.

Reads the standard `data.{noun,verb,adj,adv}` / `index.*` fixed-width offset
records directly (no external corpus reader), exposes glosses, usage
examples, hypernym traversal and sister terms, and implements the `path`,
`wup` and `res` similarity measures over the hypernym taxonomy.

A synset id is its database offset plus the POS letter, e.g. "00001740n".
Adjective satellites are keyed under 'a' like the file that stores them.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field

from .embed_store import EmbeddingTable, Vector
from .errors import DataError, FormatError, NotInWordNetError, TaxonomyError

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
_HYPERNYM_SYMBOLS = {"@", "@i"}
_ADJ_MARKER = re.compile(r"\((a|p|ip)\)$")

VIRTUAL_ROOT = "*ROOT*"


@dataclass
class Synset:
    id: str
    pos: str
    lemmas: list[str]
    gloss: str
    examples: list[str] = field(default_factory=list)
    hypernyms: list[str] = field(default_factory=list)
    hyponyms: list[str] = field(default_factory=list)

    def __repr__(self):
        head = self.lemmas[0] if self.lemmas else "?"
        return f"Synset({self.id} {head!r})"


class WordNetGraph:
    """Immutable synset graph with lemma lookup and per-POS roots."""

    def __init__(self, synsets: dict[str, Synset], lemma_index: dict[tuple[str, str], list[str]]):
        self.synsets = synsets
        self.lemma_index = lemma_index
        self.roots: dict[str, list[str]] = {p: [] for p in POS_FILES}
        for sid, syn in synsets.items():
            if not syn.hypernyms and (syn.hyponyms or syn.pos in ("n", "v")):
                self.roots[syn.pos].append(sid)
        for p in self.roots:
            self.roots[p].sort()
        self._depth_cache: dict[str, int] = {}
        self._hypo_count_cache: dict[str, int] = {}

    def synset(self, sid: str) -> Synset:
        try:
            return self.synsets[sid]
        except KeyError:
            raise DataError(f"unknown synset id {sid!r}") from None

    def synsets_for(self, lemma: str, pos: str) -> list[Synset]:
        ids = self.lemma_index.get((lemma.lower().replace(" ", "_"), pos), [])
        return [self.synsets[i] for i in ids]

    def count(self, pos: str) -> int:
        return sum(1 for s in self.synsets.values() if s.pos == pos)

    # -- taxonomy primitives -------------------------------------------------

    def ancestor_distances(self, s: Synset) -> dict[str, int]:
        """Minimum hypernym-edge distance from `s` to each ancestor (self 0)."""
        dist = {s.id: 0}
        frontier = [s.id]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for sid in frontier:
                for hid in self.synsets[sid].hypernyms:
                    if hid not in dist:
                        dist[hid] = level
                        nxt.append(hid)
            frontier = nxt
        return dist

    def root_distance(self, s: Synset) -> int:
        """Minimum number of hypernym edges from `s` to any root of its POS."""
        best = None
        for aid, d in self.ancestor_distances(s).items():
            if not self.synsets[aid].hypernyms:
                best = d if best is None else min(best, d)
        if best is None:
            raise TaxonomyError(f"{s.id} has a hypernym cycle above it")
        return best

    def depth(self, s: Synset, simulate_root: bool = False) -> int:
        """Depth of `s`, roots at depth 1 (2 when a virtual root is simulated)."""
        key = s.id
        if key not in self._depth_cache:
            self._depth_cache[key] = self.root_distance(s) + 1
        return self._depth_cache[key] + (1 if simulate_root else 0)

    def hyponym_closure_count(self, s: Synset) -> int:
        """Number of strict descendants of `s` through hyponym edges."""
        if s.id not in self._hypo_count_cache:
            seen = set()
            stack = list(s.hyponyms)
            while stack:
                sid = stack.pop()
                if sid in seen:
                    continue
                seen.add(sid)
                stack.extend(self.synsets[sid].hyponyms)
            self._hypo_count_cache[s.id] = len(seen)
        return self._hypo_count_cache[s.id]


def build_graph(entries: list[dict]) -> WordNetGraph:
    """Assemble a graph from entry dicts (programmatic construction).

    Each entry: {id, pos, lemmas, gloss, examples?, hypernyms?}.  Hyponym
    edges and the lemma index are derived; ids must end with the POS letter.
    """
    synsets: dict[str, Synset] = {}
    for e in entries:
        syn = Synset(
            id=e["id"],
            pos=e["pos"],
            lemmas=list(e["lemmas"]),
            gloss=e.get("gloss", ""),
            examples=list(e.get("examples", [])),
        )
        if syn.id[-1] != syn.pos:
            raise DataError(f"synset id {syn.id!r} must end with POS letter {syn.pos!r}")
        if syn.id in synsets:
            raise DataError(f"duplicate synset id {syn.id!r}")
        synsets[syn.id] = syn
    for e in entries:
        for hid in e.get("hypernyms", []):
            if hid not in synsets:
                raise DataError(f"unknown hypernym id {hid!r} for {e['id']!r}")
            synsets[e["id"]].hypernyms.append(hid)
            synsets[hid].hyponyms.append(e["id"])
    _check_acyclic(synsets)
    lemma_index: dict[tuple[str, str], list[str]] = {}
    for e in entries:
        for lemma in e["lemmas"]:
            key = (lemma.lower().replace(" ", "_"), e["pos"])
            lemma_index.setdefault(key, []).append(e["id"])
    return WordNetGraph(synsets, lemma_index)


# ---------------------------------------------------------------------------
# Database parsing
# ---------------------------------------------------------------------------


def _split_gloss(gloss: str) -> tuple[str, list[str]]:
    """Split a raw gloss field into definition text and quoted usage examples."""
    definition_parts = []
    examples = []
    for seg in gloss.split(";"):
        seg = seg.strip()
        if not seg:
            continue
        if seg.startswith('"'):
            examples.append(seg.strip('"'))
        else:
            definition_parts.append(seg)
    return "; ".join(definition_parts), examples


def _parse_data_line(line: str, byte_offset: int, pos_letter: str, path: str) -> tuple[Synset, list[tuple[str, str]]]:
    """Parse one data.* record; returns the synset and its raw hypernym refs."""
    if "|" in line:
        head, gloss_raw = line.split("|", 1)
    else:
        head, gloss_raw = line, ""
    toks = head.split()
    try:
        offset = int(toks[0])
        ss_type = toks[2]
        w_cnt = int(toks[3], 16)
        words = []
        for i in range(w_cnt):
            word = toks[4 + 2 * i]
            words.append(_ADJ_MARKER.sub("", word))
        base = 4 + 2 * w_cnt
        p_cnt = int(toks[base])
        pointers = []
        for i in range(p_cnt):
            sym, tgt_off, tgt_pos, _srctgt = toks[base + 1 + 4 * i : base + 5 + 4 * i]
            pointers.append((sym, tgt_off, tgt_pos))
    except (IndexError, ValueError):
        raise FormatError(f"{path}: malformed data record at byte {byte_offset}") from None
    if offset != byte_offset:
        raise FormatError(
            f"{path}: record declares offset {offset} but starts at byte {byte_offset}"
        )
    pos = "a" if ss_type == "s" else ss_type
    if pos != pos_letter:
        raise FormatError(f"{path}: record at byte {byte_offset} has ss_type {ss_type!r}")
    definition, examples = _split_gloss(gloss_raw.strip())
    syn = Synset(
        id=f"{offset:08d}{pos_letter}",
        pos=pos_letter,
        lemmas=words,
        gloss=definition,
        examples=examples,
    )
    hyper_refs = [
        (f"{int(t_off):08d}" + ("a" if t_pos == "s" else t_pos), sym)
        for sym, t_off, t_pos in pointers
        if sym in _HYPERNYM_SYMBOLS
    ]
    return syn, [(ref, sym) for ref, sym in hyper_refs]


def _parse_index_line(line: str, path: str, lineno: int) -> tuple[str, str, list[str]]:
    toks = line.split()
    try:
        lemma, pos = toks[0], toks[1]
        synset_cnt = int(toks[2])
        p_cnt = int(toks[3])
        rest = toks[4 + p_cnt :]
        offsets = rest[2 : 2 + synset_cnt]
        if len(offsets) != synset_cnt:
            raise ValueError
        sids = [f"{int(o):08d}{pos}" for o in offsets]
    except (IndexError, ValueError):
        raise FormatError(f"{path}:{lineno}: malformed index record") from None
    return lemma, "a" if pos == "s" else pos, sids


def load_wordnet(dir: str) -> WordNetGraph:
    """Load a WordNet 3.0 database directory into a validated graph.

    Hyponym edges are derived as the inverse of hypernym pointers, so the two
    directions are mutually consistent by construction.  Raises DataError on
    missing files and FormatError on malformed or dangling records.
    """
    for pos_letter, suffix in POS_FILES.items():
        for prefix in ("data", "index"):
            p = os.path.join(dir, f"{prefix}.{suffix}")
            if not os.path.exists(p):
                raise DataError(f"missing WordNet file: {prefix}.{suffix}")

    synsets: dict[str, Synset] = {}
    hyper_refs: dict[str, list[str]] = {}
    for pos_letter, suffix in POS_FILES.items():
        path = os.path.join(dir, f"data.{suffix}")
        with open(path, "rb") as fh:
            byte_offset = 0
            for raw in fh:
                line = raw.decode("utf-8", errors="replace")
                if not line.startswith(" ") and line.strip():
                    syn, refs = _parse_data_line(line.rstrip("\n"), byte_offset, pos_letter, path)
                    synsets[syn.id] = syn
                    hyper_refs[syn.id] = [r for r, _ in refs]
                byte_offset += len(raw)

    for sid, refs in hyper_refs.items():
        syn = synsets[sid]
        for ref in refs:
            if ref not in synsets:
                raise FormatError(f"dangling hypernym reference {ref} from {sid}")
            if ref not in syn.hypernyms:
                syn.hypernyms.append(ref)
                synsets[ref].hyponyms.append(sid)

    _check_acyclic(synsets)

    lemma_index: dict[tuple[str, str], list[str]] = {}
    for pos_letter, suffix in POS_FILES.items():
        path = os.path.join(dir, f"index.{suffix}")
        with open(path, "rb") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.decode("utf-8", errors="replace")
                if line.startswith(" ") or not line.strip():
                    continue
                lemma, pos, sids = _parse_index_line(line.rstrip("\n"), path, lineno)
                for ref in sids:
                    if ref not in synsets:
                        raise FormatError(f"{path}:{lineno}: dangling synset reference {ref}")
                lemma_index[(lemma, pos)] = sids

    return WordNetGraph(synsets, lemma_index)


def _check_acyclic(synsets: dict[str, Synset]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = dict.fromkeys(synsets, WHITE)
    for start in synsets:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(synsets[start].hypernyms))]
        color[start] = GRAY
        while stack:
            sid, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    raise FormatError(f"hypernym cycle through {nxt}")
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(synsets[nxt].hypernyms)))
                    advanced = True
                    break
            if not advanced:
                color[sid] = BLACK
                stack.pop()


# ---------------------------------------------------------------------------
# Database writing (fixtures, round-trip checks)
# ---------------------------------------------------------------------------

_HEADER = "  1 This database file was generated programmatically.\n"


def save_wordnet(graph: WordNetGraph, dir: str) -> dict[str, str]:
    """Write `graph` back out in WordNet 3.0 database format.

    Offsets are reassigned to actual byte positions, so synset ids change;
    the returned map takes old ids to new ids.  Index files are regenerated
    from the graph's lemma index.
    """
    os.makedirs(dir, exist_ok=True)
    by_pos: dict[str, list[Synset]] = {p: [] for p in POS_FILES}
    for sid in sorted(graph.synsets):
        syn = graph.synsets[sid]
        by_pos[syn.pos].append(syn)

    # Line lengths are offset-independent (offsets are always 8 digits), so
    # one measuring pass with placeholder offsets fixes the real offsets.
    id_map: dict[str, str] = {}
    zeros = dict.fromkeys(graph.synsets, 0)
    for pos_letter, syns in by_pos.items():
        offset = len(_HEADER.encode("utf-8"))
        for syn in syns:
            line = _format_data_line(syn, 0, zeros, pos_letter)
            id_map[syn.id] = f"{offset:08d}{pos_letter}"
            offset += len(line.encode("utf-8"))

    new_offsets = {old: int(new[:8]) for old, new in id_map.items()}
    for pos_letter, suffix in POS_FILES.items():
        path = os.path.join(dir, f"data.{suffix}")
        with open(path, "wb") as fh:
            fh.write(_HEADER.encode("utf-8"))
            for syn in by_pos[pos_letter]:
                line = _format_data_line(syn, new_offsets[syn.id], new_offsets, pos_letter)
                fh.write(line.encode("utf-8"))

    for pos_letter, suffix in POS_FILES.items():
        path = os.path.join(dir, f"index.{suffix}")
        entries = sorted(
            (lemma, sids) for (lemma, pos), sids in graph.lemma_index.items() if pos == pos_letter
        )
        with open(path, "wb") as fh:
            fh.write(_HEADER.encode("utf-8"))
            for lemma, sids in entries:
                offs = " ".join(id_map[s][:8] for s in sids)
                n = len(sids)
                fh.write(f"{lemma} {pos_letter} {n} 0 {n} 0 {offs}  \n".encode("utf-8"))
    return id_map


def _format_data_line(syn: Synset, offset: int, offsets: dict[str, int], pos_letter: str) -> str:
    words = " ".join(f"{w} 0" for w in syn.lemmas)
    pointers = []
    for hid in syn.hypernyms:
        pointers.append(f"@ {offsets[hid]:08d} {hid[8]} 0000")
    for hid in syn.hyponyms:
        pointers.append(f"~ {offsets[hid]:08d} {hid[8]} 0000")
    ptr = f"{len(pointers):03d}" + ("" if not pointers else " " + " ".join(pointers))
    frames = " 00" if pos_letter == "v" else ""
    gloss = syn.gloss
    for ex in syn.examples:
        gloss += f'; "{ex}"'
    return f"{offset:08d} 03 {pos_letter} {len(syn.lemmas):02x} {words} {ptr}{frames} | {gloss}  \n"


# ---------------------------------------------------------------------------
# Information content
# ---------------------------------------------------------------------------


@dataclass
class ICTable:
    """Information content per synset id; root concepts carry zero content."""

    values: dict[str, float]
    method: str  # "intrinsic" or "corpus_file"

    def __getitem__(self, sid: str) -> float:
        try:
            return self.values[sid]
        except KeyError:
            raise DataError(f"no information-content entry for synset {sid}") from None


def intrinsic_ic(graph: WordNetGraph, pos: str) -> ICTable:
    """Taxonomy-based information content: -log((descendants+1) / pos total).

    Roots of a single-rooted taxonomy get exactly zero; content never
    decreases when moving from a hypernym to any of its hyponyms.
    """
    total = graph.count(pos)
    if total == 0:
        raise DataError(f"no synsets with POS {pos!r}")
    values = {}
    for sid, syn in graph.synsets.items():
        if syn.pos != pos:
            continue
        p = (graph.hyponym_closure_count(syn) + 1) / total
        values[sid] = -math.log(p)
    return ICTable(values=values, method="intrinsic")


def load_ic_file(path: str, graph: WordNetGraph) -> ICTable:
    """Load corpus counts ("<offset><pos> <count>" per line) into an ICTable.

    Counts are cumulative concept frequencies; content is computed against
    the summed root count of each POS.
    """
    counts: dict[str, float] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith(("#", "wnver")):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise FormatError(f"{path}:{lineno}: expected '<offset><pos> <count>'")
            key, cnt = parts[0], parts[1]
            pos = key[-1]
            if pos not in POS_FILES and pos != "s":
                raise FormatError(f"{path}:{lineno}: bad POS suffix {pos!r}")
            sid = f"{int(key[:-1]):08d}" + ("a" if pos == "s" else pos)
            c = float(cnt)
            if c <= 0:
                raise FormatError(f"{path}:{lineno}: nonpositive count")
            counts[sid] = c
    totals: dict[str, float] = {}
    for sid, c in counts.items():
        syn = graph.synsets.get(sid)
        if syn is not None and not syn.hypernyms:
            totals[syn.pos] = totals.get(syn.pos, 0.0) + c
    values = {}
    for sid, c in counts.items():
        syn = graph.synsets.get(sid)
        if syn is None:
            continue
        total = totals.get(syn.pos)
        if not total:
            raise FormatError(f"{path}: no root counts for POS {syn.pos!r}")
        values[sid] = -math.log(min(1.0, c / total))
    return ICTable(values=values, method="corpus_file")


# ---------------------------------------------------------------------------
# Similarity measures
# ---------------------------------------------------------------------------


def _want_virtual_root(pos: str, simulate_root: bool | None) -> bool:
    # Verb taxonomies are forests; a virtual root joins them by default.
    return simulate_root if simulate_root is not None else pos == "v"


def _check_pos(a: Synset, b: Synset) -> None:
    if a.pos != b.pos:
        raise TaxonomyError(f"POS mismatch: {a.id} vs {b.id}")


def lcs(graph: WordNetGraph, a: Synset, b: Synset) -> Synset | None:
    """Deepest common hypernym ancestor; ties broken by smaller synset id."""
    _check_pos(a, b)
    da = graph.ancestor_distances(a)
    db = graph.ancestor_distances(b)
    common = set(da) & set(db)
    if not common:
        return None
    best = min(common, key=lambda sid: (-graph.depth(graph.synsets[sid]), sid))
    return graph.synsets[best]


def path_sim(graph: WordNetGraph, a: Synset, b: Synset, simulate_root: bool | None = None) -> float:
    """1 / (1 + d) for the shortest hypernym path of d edges between a and b."""
    _check_pos(a, b)
    virtual = _want_virtual_root(a.pos, simulate_root)
    da = graph.ancestor_distances(a)
    db = graph.ancestor_distances(b)
    candidates = [da[c] + db[c] for c in set(da) & set(db)]
    if virtual:
        candidates.append(graph.root_distance(a) + graph.root_distance(b) + 2)
    if not candidates:
        raise TaxonomyError(f"no connecting path between {a.id} and {b.id}")
    return 1.0 / (1.0 + min(candidates))


def wup_sim(graph: WordNetGraph, a: Synset, b: Synset, simulate_root: bool | None = None) -> float:
    """2 * depth(lcs) / (depth(a) + depth(b)), roots at depth 1."""
    _check_pos(a, b)
    virtual = _want_virtual_root(a.pos, simulate_root)
    anc = lcs(graph, a, b)
    if anc is None and not virtual:
        raise TaxonomyError(f"no common subsumer for {a.id} and {b.id}")
    lcs_depth = 1 if anc is None else graph.depth(anc, simulate_root=virtual)
    return 2.0 * lcs_depth / (graph.depth(a, simulate_root=virtual) + graph.depth(b, simulate_root=virtual))


def res_sim(graph: WordNetGraph, ic: ICTable, a: Synset, b: Synset, simulate_root: bool | None = None) -> float:
    """Information content of the least common subsumer."""
    _check_pos(a, b)
    virtual = _want_virtual_root(a.pos, simulate_root)
    anc = lcs(graph, a, b)
    if anc is None:
        if not virtual:
            raise TaxonomyError(f"no common subsumer for {a.id} and {b.id}")
        return 0.0
    return ic[anc.id]


MEASURES = ("path", "wup", "res")


def word_similarity(
    graph: WordNetGraph,
    w1: str,
    w2: str,
    pos: str,
    measure: str,
    ic: ICTable | None = None,
    simulate_root: bool | None = None,
) -> float | None:
    """Maximum synset-pair similarity between two words at the given POS.

    Returns None when either word has no synset of the POS or no synset pair
    is comparable.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if measure == "res" and ic is None:
        raise ValueError("res requires an ICTable")
    syns1 = graph.synsets_for(w1, pos)
    syns2 = graph.synsets_for(w2, pos)
    best = None
    for s1 in syns1:
        for s2 in syns2:
            try:
                if measure == "path":
                    val = path_sim(graph, s1, s2, simulate_root)
                elif measure == "wup":
                    val = wup_sim(graph, s1, s2, simulate_root)
                else:
                    val = res_sim(graph, ic, s1, s2, simulate_root)
            except (TaxonomyError, DataError):
                continue
            if best is None or val > best:
                best = val
    return best


# ---------------------------------------------------------------------------
# Hypernym-based lookups
# ---------------------------------------------------------------------------


def sister_synsets(graph: WordNetGraph, s: Synset) -> list[Synset]:
    """Synsets sharing a direct hypernym with `s`, excluding `s`, ordered by id."""
    out = set()
    for hid in s.hypernyms:
        out.update(graph.synsets[hid].hyponyms)
    out.discard(s.id)
    return [graph.synsets[sid] for sid in sorted(out)]


def first_iv_hypernym(
    graph: WordNetGraph, word: str, pos: str, table: EmbeddingTable
) -> tuple[str, Vector]:
    """First in-vocabulary lemma on the hypernym chain above `word`.

    Walks breadth-first up from the word's first synset; within a synset,
    lemmas are tried in list order (exact form, then lowercase).
    """
    syns = graph.synsets_for(word, pos)
    if not syns:
        raise NotInWordNetError(f"{word!r} has no {pos!r} synset")
    seen = set()
    frontier = list(syns[0].hypernyms)
    while frontier:
        nxt = []
        for sid in frontier:
            if sid in seen:
                continue
            seen.add(sid)
            syn = graph.synsets[sid]
            for lemma in syn.lemmas:
                for form in (lemma, lemma.lower()):
                    vec = table.lookup(form)
                    if vec is not None:
                        return form, vec
            nxt.extend(syn.hypernyms)
        frontier = nxt
    raise DataError(f"no in-vocabulary hypernym lemma above {word!r} ({pos})")
