/**
 * Pluggable constituency-parser clients behind one contract: a batch of
 * sentences in, one bracketed-tree line per sentence out.  Any parser that
 * maps one text line to one tree line works, as a spawned process
 * ("cmd:<command>") or an HTTP endpoint ("http://..." POST text/plain).
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface, type Interface } from "node:readline";
import type { Readable, Writable } from "node:stream";

export interface ParserClient {
  parseBatch(sentences: string[]): Promise<string[]>;
  close(): Promise<void>;
}

/** A returned line counts as a parse only if it is a bracketed tree. */
export function looksLikeTree(line: string): boolean {
  return line.trimStart().startsWith("(");
}

export class CmdParser implements ParserClient {
  private child: ChildProcessByStdio<Writable, Readable, null>;
  private lines: Interface;
  private queue: string[] = [];
  private waiters: Array<(line: string) => void> = [];
  private failure: Error | null = null;

  constructor(command: string[]) {
    if (command.length === 0) throw new Error("empty parser command");
    this.child = spawn(command[0], command.slice(1), { stdio: ["pipe", "pipe", "inherit"] });
    this.child.on("error", (err) => this.fail(new Error(`parser process error: ${err.message}`)));
    this.child.stdin.on("error", (err) => this.fail(new Error(`parser stdin error: ${err.message}`)));
    this.child.on("exit", (code) => {
      if (this.waiters.length > 0) {
        this.fail(new Error(`parser process exited with code ${code} mid-batch`));
      }
    });
    this.lines = createInterface({ input: this.child.stdout });
    this.lines.on("line", (line) => {
      const waiter = this.waiters.shift();
      if (waiter) waiter(line);
      else this.queue.push(line);
    });
  }

  private fail(err: Error): void {
    this.failure = err;
    for (const waiter of this.waiters.splice(0)) waiter("");
  }

  private nextLine(): Promise<string> {
    if (this.queue.length > 0) return Promise.resolve(this.queue.shift()!);
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  async parseBatch(sentences: string[]): Promise<string[]> {
    if (this.failure) throw this.failure;
    for (const s of sentences) {
      this.child.stdin.write(s.replace(/[\r\n]+/g, " ") + "\n");
    }
    const out: string[] = [];
    for (let i = 0; i < sentences.length; i++) {
      out.push(await this.nextLine());
      if (this.failure) throw this.failure;
    }
    return out;
  }

  async close(): Promise<void> {
    this.child.stdin.end();
    await new Promise<void>((resolve) => {
      if (this.child.exitCode !== null) resolve();
      else this.child.on("exit", () => resolve());
    });
  }
}

export class HttpParser implements ParserClient {
  constructor(private endpoint: string) {}

  async parseBatch(sentences: string[]): Promise<string[]> {
    const body = sentences.map((s) => s.replace(/[\r\n]+/g, " ")).join("\n");
    let res: Response;
    try {
      res = await fetch(this.endpoint, {
        method: "POST",
        headers: { "content-type": "text/plain; charset=utf-8" },
        body,
      });
    } catch (err) {
      throw new Error(`parser endpoint unreachable: ${(err as Error).message}`);
    }
    if (!res.ok) {
      throw new Error(`parser endpoint returned HTTP ${res.status}`);
    }
    const text = await res.text();
    const lines = text.split("\n");
    while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
    if (lines.length !== sentences.length) {
      throw new Error(
        `parser endpoint returned ${lines.length} lines for ${sentences.length} sentences`,
      );
    }
    return lines;
  }

  async close(): Promise<void> {}
}

export function makeParser(spec: string): ParserClient {
  if (spec.startsWith("cmd:")) {
    return new CmdParser(spec.slice(4).split(/\s+/).filter((t) => t.length > 0));
  }
  if (spec.startsWith("http://") || spec.startsWith("https://")) {
    return new HttpParser(spec);
  }
  throw new Error(`parser spec must be cmd:<command> or http(s)://..., got ${spec}`);
}
