#!/usr/bin/env node
/**
 * definnet-preprocess: extract (word, POS, synset, gloss) tuples from a
 * WordNet directory, run an external constituency parser over the glosses,
 * and emit the definition corpus consumed by `definnet ingest`.
 *
 *   definnet-preprocess --wordnet-dir DICT --parser cmd:"my-parser --flag" \
 *       --out corpus.tsv [--pos n,v] [--batch-size 32]
 *
 * The parser contract: one sentence line in, one bracketed-tree line out,
 * either as a long-running process (cmd:...) or an HTTP endpoint taking a
 * text/plain POST of newline-separated sentences.
 */

import { parseArgs } from "node:util";

import { writeCorpus } from "./corpus.js";
import { makeParser } from "./parser.js";
import { parseGlosses } from "./pipeline.js";
import { extractGlosses } from "./wordnet.js";

export interface RunOptions {
  wordnetDir: string;
  parserSpec: string;
  out: string;
  pos: string[];
  batchSize: number;
  log?: (msg: string) => void;
}

export async function run(opts: RunOptions): Promise<{ emitted: number; failed: number; skippedEmpty: number }> {
  const log = opts.log ?? ((msg: string) => console.error(msg));
  const { definitions, skippedEmpty } = extractGlosses(opts.wordnetDir, opts.pos);
  const parser = makeParser(opts.parserSpec);
  try {
    const { records, failed } = await parseGlosses(definitions, parser, opts.batchSize, log);
    writeCorpus(opts.out, records, {
      source: opts.wordnetDir,
      pos: opts.pos.join(","),
      parser: opts.parserSpec,
      seed: 0,
    });
    return { emitted: records.length, failed: failed.length, skippedEmpty };
  } finally {
    await parser.close();
  }
}

export async function main(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        "wordnet-dir": { type: "string" },
        parser: { type: "string" },
        out: { type: "string" },
        pos: { type: "string", default: "n,v" },
        "batch-size": { type: "string", default: "32" },
      },
    }));
  } catch (err) {
    console.error(`definnet-preprocess: ${(err as Error).message}`);
    return 1;
  }
  if (!values["wordnet-dir"] || !values.parser || !values.out) {
    console.error("definnet-preprocess: --wordnet-dir, --parser and --out are required");
    return 1;
  }
  try {
    const result = await run({
      wordnetDir: values["wordnet-dir"],
      parserSpec: values.parser,
      out: values.out,
      pos: values.pos!.split(",").map((s) => s.trim()).filter((s) => s.length > 0),
      batchSize: parseInt(values["batch-size"]!, 10),
    });
    console.error(
      `emitted ${result.emitted} records (${result.failed} parse failures, ` +
        `${result.skippedEmpty} empty glosses skipped)`,
    );
    return 0;
  } catch (err) {
    console.error(`definnet-preprocess: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
