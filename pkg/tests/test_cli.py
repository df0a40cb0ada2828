import json
import os

import numpy as np
import pytest

from definnet.cli import main

from conftest import FIXTURES

MINI_WN = os.path.join(FIXTURES, "mini_wordnet")
MINI_CORPUS = os.path.join(FIXTURES, "mini_corpus.tsv")

CHEERLESSNESS_PARSE = (
    "(ROOT (NP (NP (DT a) (NN feeling)) (PP (IN of)"
    " (NP (ADJP (JJ dreary) (CC or) (JJ pessimistic)) (NN sadness)))))"
)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, request):
    """Mini end-to-end workspace: table over all fixture lemmas, tiny model."""
    ws = tmp_path_factory.mktemp("cli")
    records = request.getfixturevalue("mini_corpus")
    rng = np.random.default_rng(99)
    holdout = {"cheerlessness", "deforest", "detoxify"}  # OOV in this workspace
    words = sorted({r.word for r in records} - holdout)
    table_path = ws / "table.txt"
    dim = 8
    with open(table_path, "w") as fh:
        fh.write(f"{len(words)} {dim}\n")
        for w in words:
            comps = " ".join(f"{x:.6f}" for x in rng.standard_normal(dim))
            fh.write(f"{w} {comps}\n")

    corpus = ws / "corpus.tsv"
    assert main(["ingest", "--defs", MINI_CORPUS, "--out", str(corpus), "--seed", "1"]) == 0

    model = ws / "model.ckpt"
    rc = main([
        "train", "--defs", str(corpus), "--embeddings", str(table_path),
        "--out", str(model), "--epochs", "2", "--batch-size", "8",
        "--pos-dim", "4", "--hidden1", "16", "--hidden2", "16", "--seed", "3",
    ])
    assert rc == 0
    return ws, table_path, corpus, model


class TestIngest:
    def test_rerun_byte_identical(self, workspace, tmp_path):
        out = tmp_path / "a.tsv"
        argv = ["ingest", "--defs", MINI_CORPUS, "--out", str(out), "--seed", "1"]
        assert main(argv) == 0
        first = out.read_bytes()
        assert main(argv) == 0
        assert out.read_bytes() == first

    def test_missing_file_exit_2(self, tmp_path):
        assert main(["ingest", "--defs", "/no/such/file.tsv",
                     "--out", str(tmp_path / "o.tsv")]) == 2

    def test_missing_flags_exit_1(self):
        assert main(["ingest"]) == 1


class TestTrainCommand:
    def test_rerun_checkpoint_identical(self, workspace, tmp_path):
        ws, table, corpus, _ = workspace
        outs = []
        for name in ("m1.ckpt", "m2.ckpt"):
            out = tmp_path / name
            rc = main([
                "train", "--defs", str(corpus), "--embeddings", str(table),
                "--out", str(out), "--epochs", "2", "--batch-size", "8",
                "--pos-dim", "4", "--hidden1", "16", "--hidden2", "16", "--seed", "3",
            ])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_trace_written_with_config_hash(self, workspace):
        ws, _, _, model = workspace
        trace = json.loads((ws / "model.ckpt.trace.json").read_text())
        assert "config_hash" in trace and "seed" in trace
        assert len(trace["loss_trace"]) == 2


class TestBuildDatasets:
    def test_outputs_and_determinism(self, workspace, tmp_path):
        ws, table, corpus, _ = workspace
        out = tmp_path / "d1"
        argv = [
            "build-datasets", "--wordnet-dir", MINI_WN,
            "--embeddings", str(table), "--defs", str(corpus),
            "--out", str(out), "--seed", "7",
            "--iv-pairs", "8", "--oov-pairs", "3", "--list-size", "3",
            "--delta-res", "0.05", "--delta-path", "0.01", "--delta-wup", "0.01",
        ]
        assert main(argv) == 0
        names = sorted(os.listdir(out))
        assert "train.tsv" in names and "oov_pairs.tsv" in names
        first = {n: (out / n).read_bytes() for n in names}
        assert main(argv) == 0
        assert sorted(os.listdir(out)) == names
        for n in names:
            assert (out / n).read_bytes() == first[n], n

    def test_oov_pairs_unreachable_count_exit_2(self, workspace, tmp_path):
        # only three OOV candidates exist; asking for 40 pairs must fail
        ws, table, corpus, _ = workspace
        rc = main([
            "build-datasets", "--wordnet-dir", MINI_WN,
            "--embeddings", str(table), "--defs", str(corpus),
            "--out", str(tmp_path / "d"), "--seed", "7",
            "--iv-pairs", "8", "--oov-pairs", "40", "--list-size", "3",
        ])
        assert rc == 2


class TestEvalCommands:
    def test_direct_eval_writes_report(self, workspace, tmp_path):
        ws, table, corpus, model = workspace
        out = tmp_path / "reports"
        rc = main([
            "eval", "--which", "direct", "--defs", str(corpus),
            "--embeddings", str(table), "--wordnet-dir", MINI_WN,
            "--model", str(model), "--out", str(out), "--seed", "1",
        ])
        assert rc == 0
        payload = json.loads((out / "table1.direct").read_text())
        assert set(payload["models"]) == {"definnet", "additive", "head"}
        for name, s in payload["models"].items():
            assert s["n"] > 0, name
        assert "config_hash" in payload

    def test_direct_eval_rerun_identical(self, workspace, tmp_path):
        ws, table, corpus, model = workspace
        out = tmp_path / "r1"
        argv = [
            "eval", "--which", "direct", "--defs", str(corpus),
            "--embeddings", str(table), "--wordnet-dir", MINI_WN,
            "--model", str(model), "--out", str(out), "--seed", "1",
        ]
        assert main(argv) == 0
        first = (out / "table1.direct").read_bytes()
        assert main(argv) == 0
        assert (out / "table1.direct").read_bytes() == first

    def test_missing_checkpoint_exit_2(self, workspace, tmp_path):
        ws, table, corpus, _ = workspace
        rc = main([
            "eval", "--which", "direct", "--defs", str(corpus),
            "--embeddings", str(table), "--model", "/no/model.ckpt",
            "--out", str(tmp_path / "r"),
        ])
        assert rc == 2

    def test_eval_requires_which(self, workspace, tmp_path):
        ws, table, corpus, model = workspace
        assert main(["eval", "--defs", str(corpus), "--embeddings", str(table),
                     "--out", str(tmp_path / "r")]) == 1


class TestInfer:
    def test_parse_mode_emits_vector(self, workspace, capsys):
        ws, table, corpus, model = workspace
        rc = main([
            "infer", "--model", str(model), "--embeddings", str(table),
            "--parse", CHEERLESSNESS_PARSE, "--pos", "NN",
        ])
        assert rc == 0
        out = capsys.readouterr()
        vec = [float(x) for x in out.out.strip().split()]
        assert len(vec) == 8
        assert "feeling/NN sadness/NN" in out.err

    def test_word_mode_matches_parse_mode(self, workspace, capsys):
        ws, table, corpus, model = workspace
        rc = main([
            "infer", "--model", str(model), "--embeddings", str(table),
            "--word", "cheerlessness", "--defs", str(corpus),
        ])
        assert rc == 0
        first = capsys.readouterr().out
        rc = main([
            "infer", "--model", str(model), "--embeddings", str(table),
            "--parse", CHEERLESSNESS_PARSE, "--pos", "NN",
        ])
        assert rc == 0
        assert capsys.readouterr().out == first

    def test_unknown_head_word_unusable(self, workspace, capsys):
        ws, table, corpus, model = workspace
        rc = main([
            "infer", "--model", str(model), "--embeddings", str(table),
            "--parse", "(ROOT (NP (NP (DT a) (NN qqqq)) (PP (IN of) (NP (NN sadness)))))",
            "--pos", "NN",
        ])
        assert rc == 2

    def test_missing_model_flag_exit_1(self, workspace):
        ws, table, corpus, _ = workspace
        assert main(["infer", "--embeddings", str(table), "--word", "dog",
                     "--defs", str(corpus)]) == 1

    def test_config_file_with_flag_override(self, workspace, tmp_path, capsys):
        ws, table, corpus, model = workspace
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "model": str(model), "embeddings": str(table),
            "parse": CHEERLESSNESS_PARSE, "pos": "NN",
        }))
        assert main(["infer", "--config", str(cfg)]) == 0
        baseline = capsys.readouterr().out
        assert main(["infer", "--config", str(cfg), "--pos", "VB"]) == 0
        assert capsys.readouterr().out != baseline
