import json
from pathlib import Path

import pytest

from codeprobe.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


@pytest.fixture(scope="module")
def demo_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo")
    assert main(["gen-demo-corpus", "--out", str(root), "--seed", "0"]) == EXIT_OK
    return root


@pytest.fixture(scope="module")
def corpus_file(demo_root, tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus") / "methods.jsonl"
    assert main(["build-corpus", "--root", str(demo_root), "--out", str(out)]) == EXIT_OK
    return out


class TestExitCodes:
    def test_unknown_subcommand_usage(self):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_missing_required_flag_usage(self):
        assert main(["build-corpus", "--root", "x"]) == EXIT_USAGE

    def test_help_is_success(self):
        assert main(["--help"]) == EXIT_OK

    def test_missing_corpus_root_data_error(self, tmp_path, capsys):
        out = tmp_path / "m.jsonl"
        code = main(["build-corpus", "--root", str(tmp_path / "nope"), "--out", str(out)])
        assert code == EXIT_DATA
        assert "error:" in capsys.readouterr().err

    def test_bad_backend_data_error(self, tmp_path, corpus_file, capsys):
        task = tmp_path / "t.jsonl"
        main(["build-task", "--task", "typ", "--in", str(corpus_file), "--out", str(task),
              "--size", "40"])
        code = main(["embed", "--backend", "psychic", "--task", str(task),
                     "--out", str(tmp_path / "e.cpeb")])
        assert code == EXIT_DATA
        assert "psychic" in capsys.readouterr().err


class TestChain:
    def test_full_chain_and_manifests(self, tmp_path, corpus_file):
        task = tmp_path / "task_len.jsonl"
        emb = tmp_path / "emb.cpeb"
        res = tmp_path / "results.csv"
        rep = tmp_path / "reports"
        assert main(["build-task", "--task", "len", "--in", str(corpus_file),
                     "--out", str(task), "--size", "40", "--seed", "7"]) == EXIT_OK
        assert main(["embed", "--backend", "oracle", "--task", str(task),
                     "--layers", "3", "--dim", "16", "--seed", "7",
                     "--out", str(emb)]) == EXIT_OK
        assert main(["probe", "--task", str(task), "--emb", str(emb),
                     "--seed", "7", "--out", str(res)]) == EXIT_OK
        assert main(["report", "--results", str(res), "--labels", "oracle",
                     "--out-dir", str(rep)]) == EXIT_OK
        assert (rep / "table.md").is_file()
        assert (rep / "layers_len.svg").is_file()
        # every produced artifact has a manifest sidecar with input hashes
        for artifact in (task, emb, res):
            manifest = json.loads(
                Path(str(artifact) + ".manifest.json").read_text(encoding="utf-8")
            )
            assert manifest["tool"].startswith("codeprobe ")
            assert "timestamp" in manifest

    def test_probe_rejects_mismatched_embeddings(self, tmp_path, corpus_file, capsys):
        t1 = tmp_path / "t1.jsonl"
        t2 = tmp_path / "t2.jsonl"
        emb = tmp_path / "e.cpeb"
        main(["build-task", "--task", "len", "--in", str(corpus_file),
              "--out", str(t1), "--size", "40", "--seed", "1"])
        main(["build-task", "--task", "len", "--in", str(corpus_file),
              "--out", str(t2), "--size", "40", "--seed", "2"])
        main(["embed", "--backend", "random", "--task", str(t1),
              "--layers", "2", "--dim", "8", "--out", str(emb)])
        code = main(["probe", "--task", str(t2), "--emb", str(emb),
                     "--out", str(tmp_path / "r.csv")])
        assert code == EXIT_DATA
        assert "mismatch" in capsys.readouterr().err

    def test_probe_layer_subset_and_sizes(self, tmp_path, corpus_file):
        task = tmp_path / "t.jsonl"
        emb = tmp_path / "e.cpeb"
        main(["build-task", "--task", "typ", "--in", str(corpus_file),
              "--out", str(task), "--size", "60", "--seed", "3"])
        main(["embed", "--backend", "oracle", "--task", str(task),
              "--layers", "4", "--dim", "8", "--out", str(emb)])
        res = tmp_path / "r.csv"
        assert main(["probe", "--task", str(task), "--emb", str(emb),
                     "--layers", "1..2", "--out", str(res)]) == EXIT_OK
        lines = res.read_text(encoding="utf-8").splitlines()
        assert [l.split(",")[1] for l in lines[1:]] == ["1", "2"]
        res2 = tmp_path / "r2.csv"
        assert main(["probe", "--task", str(task), "--emb", str(emb),
                     "--sizes", "10,20", "--out", str(res2)]) == EXIT_OK
        sizes = {l.split(",")[2] for l in res2.read_text().splitlines()[1:]}
        assert sizes == {"10", "20"}


class TestInspect:
    def test_inspect_prints_tokens_and_complexity(self, tmp_path, capsys):
        snippet = tmp_path / "m.java"
        snippet.write_text("void f() { if (a) return; }", encoding="utf-8")
        assert main(["inspect", "--snippet", str(snippet)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "IfStatement" in out
        assert "cyclomatic complexity: 1" in out


class TestPipeline:
    def _config(self, tmp_path, demo_root, **overrides) -> Path:
        cfg = {
            "corpus_root": str(demo_root),
            "out_dir": str(tmp_path / "out"),
            "backend": "oracle",
            "layers": "2",
            "dim": "32",
            "size": "40",
            "seed": "5",
            "tasks": "len,typ",
            "label": "demo",
        }
        cfg.update(overrides)
        path = tmp_path / f"pipeline_{abs(hash(tuple(sorted(cfg.items()))))}.cfg"
        path.write_text(
            "# demo pipeline\n" + "\n".join(f"{k} = {v}" for k, v in cfg.items()) + "\n",
            encoding="utf-8",
        )
        return path

    def test_pipeline_end_to_end(self, tmp_path, demo_root):
        cfg = self._config(tmp_path, demo_root)
        assert main(["pipeline", "--config", str(cfg)]) == EXIT_OK
        out = tmp_path / "out"
        for name in ("methods.jsonl", "task_len.jsonl", "task_typ.jsonl",
                     "emb_len.cpeb", "results_len.csv"):
            assert (out / name).is_file(), name
        table = (out / "reports" / "table.csv").read_text(encoding="utf-8")
        assert table.splitlines()[1] == "Naive,20.00,5.00,10.00,50.00"

    def test_pipeline_missing_config(self, tmp_path):
        assert main(["pipeline", "--config", str(tmp_path / "nope.cfg")]) == EXIT_DATA

    def test_pipeline_bad_line(self, tmp_path, demo_root):
        path = tmp_path / "bad.cfg"
        path.write_text("just a line without equals\n", encoding="utf-8")
        assert main(["pipeline", "--config", str(path)]) == EXIT_DATA

    def test_pipeline_deterministic_outputs(self, tmp_path, demo_root):
        cfg_a = self._config(tmp_path, demo_root, out_dir=str(tmp_path / "a"))
        cfg_b = self._config(tmp_path, demo_root, out_dir=str(tmp_path / "b"))
        assert main(["pipeline", "--config", str(cfg_a)]) == EXIT_OK
        assert main(["pipeline", "--config", str(cfg_b)]) == EXIT_OK
        a, b = tmp_path / "a", tmp_path / "b"
        names = sorted(
            p.relative_to(a) for p in a.rglob("*")
            if p.is_file() and not p.name.endswith(".manifest.json")
        )
        assert names
        for rel in names:
            assert (a / rel).read_bytes() == (b / rel).read_bytes(), rel
