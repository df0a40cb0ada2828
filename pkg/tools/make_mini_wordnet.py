#!/usr/bin/env python3
"""Generate the bundled mini WordNet fixture and its definition-parse corpus.

Writes fixtures/mini_wordnet/ (data.*/index.* in WordNet 3.0 format) and
fixtures/mini_corpus.tsv (one tab-separated record per single-token lemma:
word, POS, synset id, definition, bracketed parse).
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from definnet.datasets import WordRecord, write_corpus
from definnet.wordnet import build_graph, load_wordnet, save_wordnet

# (key, pos, lemmas, gloss, examples, hypernym keys, parse of the gloss)
SYNSETS = [
    ("entity", "n", ["entity"], "something that exists", [],
     [],
     "(ROOT (NP (NP (NN something)) (SBAR (WHNP (WDT that)) (S (VP (VBZ exists))))))"),
    ("abstraction", "n", ["abstraction"], "a general concept formed by extracting common features", [],
     ["entity"],
     "(ROOT (NP (NP (DT a) (JJ general) (NN concept)) (VP (VBN formed) (PP (IN by) (S (VP (VBG extracting) (NP (JJ common) (NNS features))))))))"),
    ("attribute", "n", ["attribute"], "an abstraction belonging to an object", [],
     ["abstraction"],
     "(ROOT (NP (NP (DT an) (NN abstraction)) (VP (VBG belonging) (PP (TO to) (NP (DT an) (NN object))))))"),
    ("state", "n", ["state"], "the condition of a person or thing", ["the current state of knowledge"],
     ["attribute"],
     "(ROOT (NP (NP (DT the) (NN condition)) (PP (IN of) (NP (NP (DT a) (NN person)) (CC or) (NP (NN thing))))))"),
    ("feeling", "n", ["feeling"], "the experiencing of affective states", ["she had a feeling of euphoria"],
     ["state"],
     "(ROOT (NP (NP (DT the) (NN experiencing)) (PP (IN of) (NP (JJ affective) (NNS states)))))"),
    ("sadness", "n", ["sadness"], "emotions experienced in a state of sorrow", [],
     ["feeling"],
     "(ROOT (NP (NP (NNS emotions)) (VP (VBN experienced) (PP (IN in) (NP (NP (DT a) (NN state)) (PP (IN of) (NP (NN sorrow))))))))"),
    ("cheerlessness", "n", ["cheerlessness"], "a feeling of dreary or pessimistic sadness", [],
     ["sadness"],
     "(ROOT (NP (NP (DT a) (NN feeling)) (PP (IN of) (NP (ADJP (JJ dreary) (CC or) (JJ pessimistic)) (NN sadness)))))"),
    ("depression", "n", ["depression"], "sad feelings of gloom and inadequacy", [],
     ["sadness"],
     "(ROOT (NP (NP (JJ sad) (NNS feelings)) (PP (IN of) (NP (NP (NN gloom)) (CC and) (NP (NN inadequacy))))))"),
    ("happiness", "n", ["happiness"], "a feeling of great pleasure", ["we all strive for happiness"],
     ["feeling"],
     "(ROOT (NP (NP (DT a) (NN feeling)) (PP (IN of) (NP (JJ great) (NN pleasure)))))"),
    ("measure", "n", ["measure"], "an amount of something", [],
     ["abstraction"],
     "(ROOT (NP (NP (DT an) (NN amount)) (PP (IN of) (NP (NN something)))))"),
    ("quantity", "n", ["quantity"], "an adequate amount of something", [],
     ["measure"],
     "(ROOT (NP (NP (DT an) (JJ adequate) (NN amount)) (PP (IN of) (NP (NN something)))))"),
    ("object", "n", ["object"], "a tangible and visible thing", ["the table was covered with objects"],
     ["entity"],
     "(ROOT (NP (DT a) (ADJP (JJ tangible) (CC and) (JJ visible)) (NN thing)))"),
    ("whole", "n", ["whole"], "an assemblage of parts regarded as a unit", [],
     ["object"],
     "(ROOT (NP (NP (DT an) (NN assemblage)) (PP (IN of) (NP (NP (NNS parts)) (VP (VBN regarded) (PP (IN as) (NP (DT a) (NN unit))))))))"),
    ("artifact", "n", ["artifact"], "an object made by a person", [],
     ["whole"],
     "(ROOT (NP (NP (DT an) (NN object)) (VP (VBN made) (PP (IN by) (NP (DT a) (NN person))))))"),
    ("instrumentality", "n", ["instrumentality"], "an artifact that helps to accomplish an end", [],
     ["artifact"],
     "(ROOT (NP (NP (DT an) (NN artifact)) (SBAR (WHNP (WDT that)) (S (VP (VBZ helps) (S (VP (TO to) (VP (VB accomplish) (NP (DT an) (NN end))))))))))"),
    ("conveyance", "n", ["conveyance"], "something that serves as a means of transportation", [],
     ["instrumentality"],
     "(ROOT (NP (NP (NN something)) (SBAR (WHNP (WDT that)) (S (VP (VBZ serves) (PP (IN as) (NP (NP (DT a) (NN means)) (PP (IN of) (NP (NN transportation))))))))))"),
    ("vehicle", "n", ["vehicle"], "a conveyance that transports people or objects", [],
     ["conveyance"],
     "(ROOT (NP (NP (DT a) (NN conveyance)) (SBAR (WHNP (WDT that)) (S (VP (VBZ transports) (NP (NP (NNS people)) (CC or) (NP (NNS objects))))))))"),
    ("craft", "n", ["craft"], "a vehicle designed for navigation", [],
     ["vehicle"],
     "(ROOT (NP (NP (DT a) (NN vehicle)) (VP (VBN designed) (PP (IN for) (NP (NN navigation))))))"),
    ("boat", "n", ["boat"], "a small vessel for travel on water", ["he took the boat to work"],
     ["craft"],
     "(ROOT (NP (NP (DT a) (JJ small) (NN vessel)) (PP (IN for) (NP (NP (NN travel)) (PP (IN on) (NP (NN water)))))))"),
    ("sled", "n", ["sled"], "a vehicle mounted on runners", [],
     ["vehicle"],
     "(ROOT (NP (NP (DT a) (NN vehicle)) (VP (VBN mounted) (PP (IN on) (NP (NNS runners))))))"),
    ("device", "n", ["device"], "an instrumentality invented for a particular purpose", ["the device is small enough to wear"],
     ["instrumentality"],
     "(ROOT (NP (NP (DT an) (NN instrumentality)) (VP (VBN invented) (PP (IN for) (NP (DT a) (JJ particular) (NN purpose))))))"),
    ("machine", "n", ["machine"], "a device powered to perform a task", [],
     ["device"],
     "(ROOT (NP (NP (DT a) (NN device)) (VP (VBN powered) (S (VP (TO to) (VP (VB perform) (NP (DT a) (NN task))))))))"),
    ("hovercraft", "n", ["hovercraft"], "a craft that moves over water on a cushion of air", [],
     ["craft", "device"],
     "(ROOT (NP (NP (DT a) (NN craft)) (SBAR (WHNP (WDT that)) (S (VP (VBZ moves) (PP (IN over) (NP (NN water))) (PP (IN on) (NP (NP (DT a) (NN cushion)) (PP (IN of) (NP (NN air))))))))))"),
    ("structure", "n", ["structure"], "a thing constructed of parts", [],
     ["artifact"],
     "(ROOT (NP (NP (DT a) (NN thing)) (VP (VBN constructed) (PP (IN of) (NP (NNS parts))))))"),
    ("organism", "n", ["organism"], "a living thing that can develop independently", [],
     ["whole"],
     "(ROOT (NP (NP (DT a) (JJ living) (NN thing)) (SBAR (WHNP (WDT that)) (S (VP (MD can) (VP (VB develop) (ADVP (RB independently))))))))"),
    ("person", "n", ["person", "someone"], "a human being", ["there was too much for one person to do"],
     ["organism"],
     "(ROOT (NP (DT a) (JJ human) (NN being)))"),
    ("driver", "n", ["driver"], "someone who drives a vehicle", [],
     ["person"],
     "(ROOT (NP (NP (NN someone)) (SBAR (WHNP (WP who)) (S (VP (VBZ drives) (NP (DT a) (NN vehicle)))))))"),
    ("taxidriver", "n", ["taxidriver", "cabman", "taxi_driver"], "someone who drives a taxi for a living", [],
     ["driver"],
     "(ROOT (NP (NP (NN someone)) (SBAR (WHNP (WP who)) (S (VP (VBZ drives) (NP (NP (DT a) (NN taxi)) (PP (IN for) (NP (DT a) (NN living)))))))))"),
    ("worker", "n", ["worker"], "a person who works", ["he is a good worker"],
     ["person"],
     "(ROOT (NP (NP (DT a) (NN person)) (SBAR (WHNP (WP who)) (S (VP (VBZ works))))))"),
    ("animal", "n", ["animal"], "a living organism that moves voluntarily", ["the dog is a friendly animal"],
     ["organism"],
     "(ROOT (NP (NP (DT a) (JJ living) (NN organism)) (SBAR (WHNP (WDT that)) (S (VP (VBZ moves) (ADVP (RB voluntarily)))))))"),
    ("dog", "n", ["dog"], "a domestic animal with four legs", ["the dog barked all night"],
     ["animal"],
     "(ROOT (NP (NP (DT a) (JJ domestic) (NN animal)) (PP (IN with) (NP (CD four) (NNS legs)))))"),
    ("cat", "n", ["cat"], "a feline mammal with soft fur", ["the cat slept on the mat"],
     ["animal"],
     "(ROOT (NP (NP (DT a) (JJ feline) (NN mammal)) (PP (IN with) (NP (JJ soft) (NN fur)))))"),
    # verbs: two separate trees, exercising the virtual root
    ("move", "v", ["move"], "change location or position", ["the car moved slowly"],
     [],
     "(ROOT (S (VP (VB change) (NP (NP (NN location)) (CC or) (NP (NN position))))))"),
    ("travel", "v", ["travel"], "move over a distance", ["we travel in summer"],
     ["move"],
     "(ROOT (S (VP (VB move) (PP (IN over) (NP (DT a) (NN distance))))))"),
    ("drive", "v", ["drive"], "operate a vehicle", ["drive a car"],
     ["travel"],
     "(ROOT (S (VP (VB operate) (NP (DT a) (NN vehicle)))))"),
    ("remove", "v", ["remove"], "take something away", [],
     [],
     "(ROOT (S (VP (VB take) (NP (NN something)) (ADVP (RB away)))))"),
    ("deforest", "v", ["deforest", "disforest"], "remove the trees from", [],
     ["remove"],
     "(ROOT (S (VP (VB remove) (NP (DT the) (NNS trees)) (PP (IN from)))))"),
    ("detoxify", "v", ["detoxify", "detoxicate"], "remove poison from", [],
     ["remove"],
     "(ROOT (S (VP (VB remove) (NP (NN poison)) (PP (IN from)))))"),
    ("strip", "v", ["strip"], "remove the surface from something", ["strip the wood"],
     ["remove"],
     "(ROOT (S (VP (VB remove) (NP (DT the) (NN surface)) (PP (IN from) (NP (NN something))))))"),
    # adjectives and adverbs: glosses only, no taxonomy
    ("happy", "a", ["happy"], "feeling pleasure", ["a happy smile"],
     [],
     "(ROOT (S (VP (VBG feeling) (NP (NN pleasure)))))"),
    ("sad", "a", ["sad"], "feeling sorrow", ["a sad smile"],
     [],
     "(ROOT (S (VP (VBG feeling) (NP (NN sorrow)))))"),
    ("quickly", "r", ["quickly", "rapidly"], "with rapid movements", ["he works quickly"],
     [],
     "(ROOT (PP (IN with) (NP (JJ rapid) (NNS movements))))"),
]


def build():
    key_to_id = {}
    counters = {"n": 0, "v": 0, "a": 0, "r": 0}
    for key, pos, *_ in SYNSETS:
        counters[pos] += 1
        key_to_id[key] = f"{counters[pos]:08d}{pos}"
    entries = []
    for key, pos, lemmas, gloss, examples, hypers, _parse in SYNSETS:
        entries.append({
            "id": key_to_id[key],
            "pos": pos,
            "lemmas": lemmas,
            "gloss": gloss,
            "examples": examples,
            "hypernyms": [key_to_id[h] for h in hypers],
        })
    return build_graph(entries), key_to_id


def main():
    root = os.path.join(os.path.dirname(__file__), "..")
    wn_dir = os.path.join(root, "fixtures", "mini_wordnet")
    graph, key_to_id = build()
    id_map = save_wordnet(graph, wn_dir)

    reloaded = load_wordnet(wn_dir)
    counts = {p: reloaded.count(p) for p in "nvar"}
    print("synset counts:", counts, "total", len(reloaded.synsets))

    records = []
    for key, pos, lemmas, gloss, _examples, _hypers, parse in SYNSETS:
        new_id = id_map[key_to_id[key]]
        for lemma in lemmas:
            if "_" in lemma:
                continue
            records.append(WordRecord(lemma, pos, new_id, gloss, parse))
    records.sort(key=lambda r: (r.pos, r.synset_id, r.word))
    corpus_path = os.path.join(root, "fixtures", "mini_corpus.tsv")
    write_corpus(records, corpus_path, {"source": "mini_wordnet", "seed": 0})
    print("corpus records:", len(records))


if __name__ == "__main__":
    main()
