/**
 * Minimal WordNet 3.0 database reader: enough to stream one
 * (word, POS, synset, gloss) tuple per lemma's first sense.
 *
 * Reads the standard data.{noun,verb,adj,adv} / index.* files directly.
 * Gloss text is split into the definition part and quoted usage examples;
 * only the definition is kept (examples are stripped).
 */

import { readFileSync, existsSync } from "node:fs";
import { join } from "node:path";

export interface RawDefinition {
  word: string;
  pos: string; // n v a r
  synsetId: string; // 8-digit offset + POS letter
  gloss: string; // definition text, usage examples stripped
}

export const POS_FILES: Record<string, string> = {
  n: "noun",
  v: "verb",
  a: "adj",
  r: "adv",
};

/** Definition segments of a raw gloss field, examples dropped. */
export function stripExamples(gloss: string): string {
  const parts = gloss
    .split(";")
    .map((s) => s.trim())
    .filter((s) => s.length > 0 && !s.startsWith('"'));
  return parts.join("; ");
}

function dataLines(path: string): string[] {
  return readFileSync(path, "utf-8")
    .split("\n")
    .filter((line) => line.length > 0 && !line.startsWith(" "));
}

/** Map from 8-digit offset to stripped gloss for one data.pos file. */
export function readGlosses(dir: string, pos: string): Map<string, string> {
  const path = join(dir, `data.${POS_FILES[pos]}`);
  const out = new Map<string, string>();
  for (const line of dataLines(path)) {
    const bar = line.indexOf("|");
    const rawGloss = bar >= 0 ? line.slice(bar + 1).trim() : "";
    const offset = line.slice(0, 8);
    out.set(offset, stripExamples(rawGloss));
  }
  return out;
}

interface IndexEntry {
  lemma: string;
  firstOffset: string;
}

/** Lemma entries of one index.pos file, in file order. */
export function readIndex(dir: string, pos: string): IndexEntry[] {
  const path = join(dir, `index.${POS_FILES[pos]}`);
  const out: IndexEntry[] = [];
  for (const line of dataLines(path)) {
    const toks = line.trim().split(/\s+/);
    // lemma pos synset_cnt p_cnt [symbols...] sense_cnt tagsense_cnt offsets...
    const pCnt = parseInt(toks[3], 10);
    const firstOffset = toks[4 + pCnt + 2];
    if (!firstOffset || !/^\d{8}$/.test(firstOffset)) {
      throw new Error(`${path}: malformed index record for ${toks[0]}`);
    }
    out.push({ lemma: toks[0], firstOffset });
  }
  return out;
}

/**
 * One RawDefinition per (lemma, first sense) for the requested POS letters.
 * Lemmas whose first sense has an empty definition are skipped and counted.
 */
export function extractGlosses(
  dir: string,
  posFilter: string[] = ["n", "v"],
): { definitions: RawDefinition[]; skippedEmpty: number } {
  for (const pos of posFilter) {
    if (!(pos in POS_FILES)) throw new Error(`unknown POS letter ${pos}`);
    for (const prefix of ["data", "index"]) {
      const p = join(dir, `${prefix}.${POS_FILES[pos]}`);
      if (!existsSync(p)) throw new Error(`missing WordNet file: ${p}`);
    }
  }
  const definitions: RawDefinition[] = [];
  let skippedEmpty = 0;
  for (const pos of posFilter) {
    const glosses = readGlosses(dir, pos);
    for (const { lemma, firstOffset } of readIndex(dir, pos)) {
      const gloss = glosses.get(firstOffset);
      if (gloss === undefined) {
        throw new Error(`dangling index reference ${firstOffset}${pos} for ${lemma}`);
      }
      if (gloss === "") {
        skippedEmpty += 1;
        continue;
      }
      definitions.push({ word: lemma, pos, synsetId: `${firstOffset}${pos}`, gloss });
    }
  }
  return { definitions, skippedEmpty };
}
