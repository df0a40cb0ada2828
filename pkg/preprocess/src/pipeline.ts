/**
 * Gloss-to-corpus pipeline: stream definitions out of WordNet, parse them in
 * batches through a ParserClient, and collect corpus records in a
 * deterministic order (sorted by synset id, then word).  Parser failures on
 * individual sentences are logged and the record skipped; transport errors
 * abort the run.
 */

import type { ParserClient } from "./parser.js";
import { looksLikeTree } from "./parser.js";
import type { RawDefinition } from "./wordnet.js";
import type { CorpusRecord } from "./corpus.js";

export interface PipelineResult {
  records: CorpusRecord[];
  failed: Array<{ word: string; synsetId: string; reason: string }>;
}

export async function parseGlosses(
  definitions: RawDefinition[],
  parser: ParserClient,
  batchSize = 32,
  log: (msg: string) => void = () => {},
): Promise<PipelineResult> {
  const ordered = [...definitions].sort((a, b) =>
    a.synsetId < b.synsetId ? -1 : a.synsetId > b.synsetId ? 1 : a.word.localeCompare(b.word),
  );
  const records: CorpusRecord[] = [];
  const failed: PipelineResult["failed"] = [];
  for (let start = 0; start < ordered.length; start += batchSize) {
    const batch = ordered.slice(start, start + batchSize);
    const trees = await parser.parseBatch(batch.map((d) => d.gloss));
    for (let i = 0; i < batch.length; i++) {
      const d = batch[i];
      const tree = trees[i].trim();
      if (!looksLikeTree(tree)) {
        failed.push({ word: d.word, synsetId: d.synsetId, reason: `not a tree: ${tree || "(empty)"}` });
        log(`skip ${d.word}/${d.synsetId}: parser returned ${tree || "(empty line)"}`);
        continue;
      }
      records.push({ word: d.word, pos: d.pos, synsetId: d.synsetId, gloss: d.gloss, parse: tree });
    }
  }
  return { records, failed };
}
