"""Command-line driver: ingest, build-datasets, train, eval, infer.

Every command is a pure function of (config file, input files, seed): reruns
with the same inputs produce byte-identical outputs.  Each output file embeds
the effective-config hash and the seed.  Exit codes: 0 ok, 1 usage, 2 data
error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import datasets, evaluation, predictors, wordnet
from .defparse import extract_pair, parse_ptb
from .denn import DennConfig, DennModel, load_model, predict_oov, save_model, train
from .embed_store import cosine, load_embeddings
from .errors import (
    DataError,
    DefinnetError,
    FormatError,
    NumericError,
    UnusablePairError,
    ZeroNormError,
)


@dataclass
class RunConfig:
    wordnet_dir: str | None = None
    embeddings: str | None = None
    format: str = "text"
    ngrams: str | None = None
    defs: str | None = None
    out: str | None = None
    model: str | None = None
    seed: int = 0
    split_ratio: float = 0.8
    iv_pairs: int = 200
    oov_pairs: int = 200
    list_size: int = 7
    delta_path: float = 0.02
    delta_wup: float = 0.02
    delta_res: float = 0.1
    require_example: bool = False
    epochs: int = 20
    batch_size: int = 64
    lr: float = 1e-3
    optimizer: str = "adam"
    pos_dim: int = 16
    hidden1: int = 512
    hidden2: int = 512
    dropout_p: float = 0.1
    leaky_slope: float = 0.01
    measure: str | None = None
    max_reject_fraction: float = 0.05
    word: str | None = None
    parse: str | None = None
    pos: str | None = None
    which: str | None = None

    def hash(self) -> str:
        canon = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]

    def deltas(self) -> dict[str, float]:
        return {"path": self.delta_path, "wup": self.delta_wup, "res": self.delta_res}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    base: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            base = json.load(fh)
    known = {f.name for f in fields(RunConfig)}
    bad = set(base) - known
    if bad:
        raise DataError(f"unknown config keys: {sorted(bad)}")
    base.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**{k: v for k, v in base.items() if k in known})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _load_table(cfg: RunConfig, path: str | None = None, name: str | None = None):
    path = path if path is not None else cfg.embeddings
    if path is None:
        raise ValueError("no embeddings file given (--embeddings)")
    return load_embeddings(path, cfg.format, name=name or os.path.basename(path))


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"seed": cfg.seed, "config_hash": cfg.hash()}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_ingest(cfg: RunConfig) -> int:
    if cfg.defs is None or cfg.out is None:
        raise ValueError("ingest needs --defs and --out")
    records, rejects, _ = datasets.ingest_corpus(cfg.defs, cfg.max_reject_fraction)
    datasets.write_corpus(records, cfg.out, _meta(cfg, source=os.path.basename(cfg.defs)))
    for lineno, reason in rejects:
        print(f"reject line {lineno}: {reason}", file=sys.stderr)
    print(f"ingested {len(records)} records, rejected {len(rejects)}")
    if not records:
        print("warning: empty corpus", file=sys.stderr)
    return 0


def cmd_build_datasets(cfg: RunConfig) -> int:
    if not all((cfg.wordnet_dir, cfg.embeddings, cfg.defs, cfg.out)):
        raise ValueError("build-datasets needs --wordnet-dir, --embeddings, --defs, --out")
    os.makedirs(cfg.out, exist_ok=True)
    graph = wordnet.load_wordnet(cfg.wordnet_dir)
    table = _load_table(cfg)
    records, _ = datasets.read_corpus(cfg.defs)
    ic_by_pos = {p: wordnet.intrinsic_ic(graph, p) for p in ("n", "v") if graph.count(p)}

    iv_words, oov_words = datasets.split_iv_oov(
        graph, table, require_example=cfg.require_example
    )
    iv_set, oov_set = set(iv_words), set(oov_words)
    meta = _meta(cfg, source=table.name)

    def usable(rec):
        pair = rec.ensure_pair()
        return pair.w_h in table or pair.w_h.lower() in table

    iv_records = [r for r in records if (r.word, r.pos) in iv_set and usable(r)]
    oov_records = [r for r in records if (r.word, r.pos) in oov_set and usable(r)]

    train_set, test_set = datasets.build_direct_sets(iv_records, cfg.split_ratio, cfg.seed)
    datasets.write_corpus(train_set, os.path.join(cfg.out, "train.tsv"), meta)
    datasets.write_corpus(test_set, os.path.join(cfg.out, "test.tsv"), meta)

    jobs = [("iv", iv_records, cfg.iv_pairs), ("oov", oov_records, cfg.oov_pairs)]
    for tag, pool, count in jobs:
        pairs, skipped = datasets.build_pairs(
            pool, iv_words, graph, count, seed=cfg.seed, ic_by_pos=ic_by_pos
        )
        datasets.write_pairs(pairs, os.path.join(cfg.out, f"{tag}_pairs.tsv"), meta)
        for line in skipped:
            print(f"skip [{tag}]: {line}", file=sys.stderr)
        for measure, delta in cfg.deltas().items():
            lists, leftovers = datasets.build_lists(
                pairs, measure, cfg.list_size, delta, seed=cfg.seed
            )
            datasets.write_lists(
                lists, os.path.join(cfg.out, f"{tag}_lists_{measure}.tsv"), meta
            )
            print(f"{tag}/{measure}: {len(lists)} lists, {len(leftovers)} leftover")
    print(
        f"IV words {len(iv_words)}, OOV words {len(oov_words)}, "
        f"train {len(train_set)}, test {len(test_set)}"
    )
    return 0


def _denn_config(cfg: RunConfig, records, dim: int) -> DennConfig:
    return DennConfig(
        dim=dim,
        pos_vocab=datasets.pos_vocab_from_records(records),
        pos_dim=cfg.pos_dim,
        hidden1=cfg.hidden1,
        hidden2=cfg.hidden2,
        leaky_slope=cfg.leaky_slope,
        dropout_p=cfg.dropout_p,
        seed=cfg.seed,
    )


def cmd_train(cfg: RunConfig) -> int:
    if not all((cfg.defs, cfg.embeddings, cfg.out)):
        raise ValueError("train needs --defs (training corpus), --embeddings, --out")
    table = _load_table(cfg)
    records, _ = datasets.read_corpus(cfg.defs)
    config = _denn_config(cfg, records, table.dim)
    examples, skipped = datasets.to_train_examples(records, table, config)
    if not examples:
        raise DataError("no trainable examples (targets or super-types all OOV)")
    model = DennModel.initialize(config)
    model, trace = train(
        model, examples,
        epochs=cfg.epochs, batch_size=cfg.batch_size,
        optimizer=cfg.optimizer, lr=cfg.lr, seed=cfg.seed,
    )
    save_model(model, cfg.out)
    _write_json(cfg.out + ".trace.json", _meta(
        cfg, loss_trace=trace, examples=len(examples), skipped=skipped,
        zero_output_count=model.zero_output_count,
    ))
    final = trace[-1] if trace else float("nan")
    print(f"trained on {len(examples)} examples ({skipped} skipped), final loss {final:.4f}")
    return 0


def _predictor_map(cfg: RunConfig, graph, table):
    out = {}
    if cfg.model:
        out["definnet"] = predictors.denn_predictor(load_model(cfg.model), table)
    out["additive"] = predictors.additive_predictor(table)
    if graph is not None:
        out["head"] = predictors.head_predictor(graph, table)
    if cfg.ngrams:
        ngram_table = load_embeddings(cfg.ngrams, cfg.format,
                                      name=os.path.basename(cfg.ngrams))
        out["ngram"] = predictors.ngram_predictor(ngram_table)
    return out


def _paired_wilcoxon(per_model_values: dict[str, dict]) -> dict:
    """One-sided Wilcoxon p for every ordered model pair on shared keys."""
    out = {}
    names = sorted(per_model_values)
    for a in names:
        for b in names:
            if a == b:
                continue
            shared = sorted(set(per_model_values[a]) & set(per_model_values[b]))
            if len(shared) < 2:
                continue
            xs = [per_model_values[a][k] for k in shared]
            ys = [per_model_values[b][k] for k in shared]
            try:
                p = evaluation.wilcoxon_one_sided(xs, ys)
            except DefinnetError:
                continue
            out[f"{a}>{b}"] = {"p": p, "n": len(shared)}
    return out


def cmd_eval(cfg: RunConfig) -> int:
    if cfg.which not in ("direct", "auc", "iv_corr", "oov_corr"):
        raise ValueError("eval needs --which {direct,auc,iv_corr,oov_corr}")
    if not cfg.out:
        raise ValueError("eval needs --out directory")
    os.makedirs(cfg.out, exist_ok=True)
    table = _load_table(cfg)
    graph = wordnet.load_wordnet(cfg.wordnet_dir) if cfg.wordnet_dir else None

    if cfg.which == "direct":
        if not cfg.defs:
            raise ValueError("eval direct needs --defs (test corpus)")
        records, _ = datasets.read_corpus(cfg.defs)
        per_model: dict[str, dict] = {}
        summaries = {}
        for name, fn in _predictor_map(cfg, graph, table).items():
            if name == "ngram":
                continue  # n-gram composition is indirect-only (OOV synthesis)
            values = {}
            for rec in records:
                stored = table.lookup(rec.word)
                if stored is None:
                    continue
                try:
                    values[(rec.word, rec.pos, rec.synset_id)] = cosine(fn(rec), stored)
                except DefinnetError:
                    continue
            per_model[name] = values
            summaries[name] = {
                "mean": float(np.mean(list(values.values()))) if values else None,
                "std": float(np.std(list(values.values()))) if values else None,
                "n": len(values),
                "excluded": len(records) - len(values),
                "values": {" ".join(k): v for k, v in sorted(values.items())},
            }
        payload = _meta(cfg, models=summaries,
                        wilcoxon=_paired_wilcoxon(per_model))
        _write_json(os.path.join(cfg.out, "table1.direct"), payload)
        _print_direct_summary(summaries, payload["wilcoxon"])
        return 0

    if cfg.which == "auc":
        if not cfg.defs:
            raise ValueError("eval auc needs --defs (pairs file)")
        pairs, _, _ = datasets.read_pairs(cfg.defs)
        by_pos: dict[str, tuple[list, list]] = {}
        excluded = 0
        for p in pairs:
            v1, v2 = table.lookup(p.w1.word), table.lookup(p.w2)
            if v1 is None or v2 is None:
                excluded += 1
                continue
            scores, labels = by_pos.setdefault(p.w1.pos, ([], []))
            scores.append(cosine(v1, v2))
            labels.append(p.relation)
        result = {}
        for pos, (scores, labels) in sorted(by_pos.items()):
            result[pos] = {
                "auc": evaluation.auc_roc(scores, labels),
                "n": len(scores),
                "scores": scores,
                "labels": labels,
            }
        payload = _meta(cfg, auc=result, excluded=excluded, table=table.name)
        _write_json(os.path.join(cfg.out, "table2.auc"), payload)
        for pos, r in sorted(result.items()):
            print(f"AUC[{pos}] = {r['auc']:.3f} over {r['n']} pairs")
        return 0

    # correlation evaluations over 7-pair lists
    if not cfg.defs:
        raise ValueError("eval needs --defs (lists file)")
    lists, meta = datasets.read_lists(cfg.defs)
    measure = meta["measure"]
    if cfg.measure and cfg.measure != measure:
        raise DataError(
            f"--measure {cfg.measure} but {cfg.defs} holds {measure} lists"
        )
    if cfg.which == "iv_corr":
        def space_fn(rec):
            vec = table.lookup(rec.word)
            if vec is None:
                raise DataError(f"{rec.word!r} not in table")
            return vec

        report = evaluation.indirect_eval(space_fn, lists, table, measure)
        payload = _meta(cfg, table=table.name, report={measure: report.to_dict()})
        _write_json(os.path.join(cfg.out, "table3.iv-corr"), payload)
        print(f"{table.name} vs {measure}: {report.mean:.3f} (+/-{report.std:.3f}) "
              f"over {len(report.rhos)} lists")
        return 0

    reports = {}
    per_model_rhos: dict[str, dict] = {}
    for name, fn in _predictor_map(cfg, graph, table).items():
        report = evaluation.indirect_eval(fn, lists, table, measure)
        reports[name] = report.to_dict()
        per_model_rhos[name] = dict(enumerate(report.rhos))
    payload = _meta(cfg, measure=measure, models=reports,
                    wilcoxon=_paired_wilcoxon(per_model_rhos))
    _write_json(os.path.join(cfg.out, "table4.oov-corr"), payload)
    for name, rep in sorted(reports.items()):
        print(f"{name} vs {measure}: {rep['mean']:.3f} (+/-{rep['std']:.3f}) "
              f"over {rep['n_lists']} lists")
    return 0


def _print_direct_summary(summaries: dict, wilcoxon: dict) -> None:
    for name, s in sorted(summaries.items()):
        if s["mean"] is None:
            print(f"{name}: no usable records")
        else:
            print(f"{name}: {s['mean']:.3f} (+/-{s['std']:.3f}) over {s['n']} words")
    for key, r in sorted(wilcoxon.items()):
        print(f"wilcoxon {key}: p={r['p']:.4g} (n={r['n']})")


def cmd_infer(cfg: RunConfig) -> int:
    if not cfg.model:
        raise ValueError("infer needs --model")
    if not cfg.embeddings:
        raise ValueError("infer needs --embeddings")
    model = load_model(cfg.model)
    table = _load_table(cfg)
    if cfg.parse:
        if not cfg.pos:
            raise ValueError("infer with --parse needs --pos (target POS tag)")
        pair = extract_pair(parse_ptb(cfg.parse))
        pos_c = cfg.pos
    elif cfg.word:
        if not cfg.defs:
            raise ValueError("infer with --word needs --defs (corpus with parses)")
        records, _ = datasets.read_corpus(cfg.defs, extract=False)
        matches = [r for r in records if r.word == cfg.word]
        if not matches:
            raise DataError(f"{cfg.word!r} not found in {cfg.defs}")
        rec = matches[0]
        pair = rec.ensure_pair()
        pos_c = rec.pos_c
    else:
        raise ValueError("infer needs --word or --parse")
    vec = predict_oov(model, table, pair, pos_c)
    mod = f"{pair.w_m}/{pair.pos_m}" if pair.w_m else "-"
    print(f"# pair: {pair.w_h}/{pair.pos_h} {mod}", file=sys.stderr)
    print(" ".join(np.format_float_positional(x, unique=True, trim="0") for x in vec))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

_COMMANDS = {
    "ingest": cmd_ingest,
    "build-datasets": cmd_build_datasets,
    "train": cmd_train,
    "eval": cmd_eval,
    "infer": cmd_infer,
}


def _add_common(p: _Parser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--seed", type=int)
    p.add_argument("--wordnet-dir", dest="wordnet_dir")
    p.add_argument("--embeddings")
    p.add_argument("--format", choices=["text", "binary"])
    p.add_argument("--ngrams", help="n-gram embedding table for the composition baseline")
    p.add_argument("--defs")
    p.add_argument("--out")
    p.add_argument("--model")


def build_parser() -> _Parser:
    parser = _Parser(prog="definnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a raw definition corpus")
    _add_common(p)
    p.add_argument("--max-reject-fraction", dest="max_reject_fraction", type=float)

    p = sub.add_parser("build-datasets", help="IV/OOV split, train/test, pairs, lists")
    _add_common(p)
    p.add_argument("--split-ratio", dest="split_ratio", type=float)
    p.add_argument("--iv-pairs", dest="iv_pairs", type=int)
    p.add_argument("--oov-pairs", dest="oov_pairs", type=int)
    p.add_argument("--list-size", dest="list_size", type=int)
    p.add_argument("--delta-path", dest="delta_path", type=float)
    p.add_argument("--delta-wup", dest="delta_wup", type=float)
    p.add_argument("--delta-res", dest="delta_res", type=float)
    p.add_argument("--require-example", dest="require_example", action="store_const", const=True)

    p = sub.add_parser("train", help="train the composition network")
    _add_common(p)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--optimizer", choices=["sgd", "adam"])
    p.add_argument("--pos-dim", dest="pos_dim", type=int)
    p.add_argument("--hidden1", type=int)
    p.add_argument("--hidden2", type=int)
    p.add_argument("--dropout-p", dest="dropout_p", type=float)

    p = sub.add_parser("eval", help="run an evaluation protocol")
    _add_common(p)
    p.add_argument("--which", choices=["direct", "auc", "iv_corr", "oov_corr"])
    p.add_argument("--measure", choices=["path", "wup", "res"])

    p = sub.add_parser("infer", help="embed one word from its definition")
    _add_common(p)
    p.add_argument("--word")
    p.add_argument("--parse", help="bracketed constituency parse of the definition")
    p.add_argument("--pos", help="target POS tag, e.g. NN")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    try:
        cfg = load_config(config_path, args)
        return _COMMANDS[command](cfg)
    except (DataError, FormatError, UnusablePairError, FileNotFoundError) as exc:
        print(f"definnet {command}: data error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ZeroNormError) as exc:
        print(f"definnet {command}: numeric failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"definnet {command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
