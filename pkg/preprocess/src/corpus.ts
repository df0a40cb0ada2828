/**
 * Writer for the definition-corpus format consumed downstream:
 * a "# {json}" header line, then one tab-separated record per line with
 * fields word, POS letter, synset id, definition text, bracketed parse.
 */

import { writeFileSync } from "node:fs";

export interface CorpusRecord {
  word: string;
  pos: string;
  synsetId: string;
  gloss: string;
  parse: string;
}

function sortedJson(obj: Record<string, unknown>): string {
  const keys = Object.keys(obj).sort();
  const pairs = keys.map((k) => `${JSON.stringify(k)}: ${JSON.stringify(obj[k])}`);
  return `{${pairs.join(", ")}}`;
}

export function corpusText(records: CorpusRecord[], meta: Record<string, unknown>): string {
  const header = sortedJson({ ...meta, kind: "corpus", format: 1 });
  const lines = [`# ${header}`];
  for (const r of records) {
    for (const field of [r.word, r.pos, r.synsetId, r.gloss, r.parse]) {
      if (field.includes("\t") || field.includes("\n")) {
        throw new Error(`record field contains a separator: ${JSON.stringify(field)}`);
      }
    }
    lines.push([r.word, r.pos, r.synsetId, r.gloss, r.parse].join("\t"));
  }
  return lines.join("\n") + "\n";
}

export function writeCorpus(
  path: string,
  records: CorpusRecord[],
  meta: Record<string, unknown>,
): void {
  writeFileSync(path, corpusText(records, meta), "utf-8");
}
