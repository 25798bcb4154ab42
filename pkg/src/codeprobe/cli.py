"""codeprobe command line interface.

Subcommands chain the pipeline: build-corpus -> build-task -> embed ->
probe -> report. `pipeline` runs the whole chain from one key=value config
file. Exit codes: 0 success, 1 usage error, 2 data/validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from ._util import CodeProbeError
from .corpus import build_corpus, read_corpus, write_corpus
from .devcorpus import write_corpus_tree
from .embedstore import MockBackendKind, mock_embed, read_embeddings, write_embeddings
from .probe import (
    ProbeConfig,
    ProbeResults,
    read_results,
    run_layerwise,
    run_sample_curve,
    write_results,
)
from .report import write_report
from .syntax import ast_tag_tokens, cyclomatic, lex, parse_method
from .tasks import (
    TaskKind,
    build_dataset,
    dataset_manifest_hash,
    file_sha256,
    read_dataset,
    write_dataset,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def _write_manifest(out_path: Path, command: str, args: dict, inputs: list[Path]) -> None:
    manifest = {
        "tool": f"codeprobe {__version__}",
        "command": command,
        "flags": {k: str(v) for k, v in sorted(args.items())},
        "inputs": {str(p): file_sha256(p) for p in inputs if Path(p).is_file()},
        "seed": args.get("seed"),
        "timestamp": int(time.time()),
    }
    Path(str(out_path) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )


def _cmd_build_corpus(args: argparse.Namespace) -> int:
    snippets, warnings, skipped = build_corpus(args.root, args.min_tokens, args.max_tokens)
    write_corpus(snippets, args.out)
    _write_manifest(Path(args.out), "build-corpus", vars(args), [])
    for w in warnings:
        print(f"warning: {w.path}: {w.reason}", file=sys.stderr)
    print(f"{len(snippets)} snippets -> {args.out} ({skipped} non-UTF-8 files skipped)")
    return EXIT_OK


def _cmd_build_task(args: argparse.Namespace) -> int:
    snippets = read_corpus(args.infile)
    task = TaskKind(args.task.upper())
    ds = build_dataset(
        task,
        snippets,
        size_cap=args.size,
        seed=args.seed,
        split_ratio=args.split,
        allow_missing_classes=args.allow_missing_classes,
    )
    write_dataset(ds, args.out, corpus_sha256=file_sha256(args.infile))
    _write_manifest(Path(args.out), "build-task", vars(args), [Path(args.infile)])
    print(f"{task.value}: {len(ds.instances)} instances, {ds.class_count} classes -> {args.out}")
    return EXIT_OK


def _cmd_embed(args: argparse.Namespace) -> int:
    ds, manifest_line = read_dataset(args.task)
    kind = MockBackendKind.parse(args.backend)
    emb = mock_embed(kind, ds, n_layers=args.layers, dim=args.dim, seed=args.seed)
    emb.manifest_hash = dataset_manifest_hash(manifest_line)
    write_embeddings(emb, args.out)
    _write_manifest(Path(args.out), "embed", vars(args), [Path(args.task)])
    print(f"{emb.n_layers} layers x {emb.n_instances} x {emb.dim} -> {args.out}")
    return EXIT_OK


def _parse_layers(spec: str, n_layers: int) -> list[int] | None:
    if spec == "all":
        return None
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",")]


def _cmd_probe(args: argparse.Namespace) -> int:
    ds, manifest_line = read_dataset(args.task)
    emb = read_embeddings(args.emb, expect_manifest_hash=dataset_manifest_hash(manifest_line))
    config = ProbeConfig(seed=args.seed, epochs=args.epochs, learning_rate=args.lr)
    layers = _parse_layers(args.layers, emb.n_layers)
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    if sizes:
        results = run_sample_curve(ds, emb, sizes=sizes, config=config)
    else:
        results = run_layerwise(ds, emb, config=config, layers=layers)
    write_results(results, args.out)
    _write_manifest(Path(args.out), "probe", vars(args), [Path(args.task), Path(args.emb)])
    print(f"{len(results.entries)} probe runs -> {args.out}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    paths = args.results.split(",")
    labels = args.labels.split(",") if args.labels else [Path(p).stem for p in paths]
    if len(labels) != len(paths):
        raise CodeProbeError("--labels count must match --results count")
    results_list = [read_results(p) for p in paths]
    written = write_report(results_list, labels, args.out_dir, policy=args.cell)
    _write_manifest(Path(args.out_dir) / "report", "report", vars(args), [Path(p) for p in paths])
    for p in written:
        print(p)
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace) -> int:
    text = Path(args.snippet).read_text(encoding="utf-8")
    tokens = lex(text)
    tree = parse_method(tokens)
    tags = dict(ast_tag_tokens(tree))
    for i, tok in enumerate(tokens):
        tag = tags.get(i)
        tag_name = tag.name if tag is not None else "-"
        print(f"{i:4d}  {tok.kind.name:14s} {tag_name:26s} {tok.text!r}")
    print(f"cyclomatic complexity: {cyclomatic(tree)}")
    return EXIT_OK


def _cmd_gen_demo_corpus(args: argparse.Namespace) -> int:
    n = write_corpus_tree(
        args.out,
        seed=args.seed,
        per_theme=args.per_theme,
        per_complexity=args.per_complexity,
        per_length_bin=args.per_length_bin,
    )
    print(f"{n} synthetic methods -> {args.out}")
    return EXIT_OK


def _read_pipeline_config(path: Path) -> dict[str, str]:
    if not path.is_file():
        raise CodeProbeError(f"pipeline config not found: {path}")
    config: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CodeProbeError(f"{path}:{lineno}: expected key = value")
        key, value = line.split("=", 1)
        config[key.strip()] = value.strip()
    return config


def _cmd_pipeline(args: argparse.Namespace) -> int:
    cfg = _read_pipeline_config(Path(args.config))
    root = Path(cfg["corpus_root"])
    out_dir = Path(cfg["out_dir"])
    if not root.is_dir():
        raise CodeProbeError(f"corpus root does not exist: {root}")
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = int(cfg.get("seed", "42"))
    size = int(cfg.get("size", "10000"))
    split = float(cfg.get("split", "0.8"))
    layers = int(cfg.get("layers", "13"))
    dim = int(cfg.get("dim", "128"))
    backend = MockBackendKind.parse(cfg.get("backend", "random"))
    tasks = [TaskKind(t.strip().upper()) for t in cfg.get("tasks", "len,ast,cpx,typ").split(",")]
    sizes = cfg.get("sizes", "")
    allow_missing = cfg.get("allow_missing_classes", "false").lower() in ("1", "true", "yes")

    snippets, warnings, _ = build_corpus(root)
    corpus_path = out_dir / "methods.jsonl"
    write_corpus(snippets, corpus_path)
    corpus_sha = file_sha256(corpus_path)
    print(f"corpus: {len(snippets)} snippets ({len(warnings)} file warnings)")

    results_paths: list[str] = []
    labels: list[str] = []
    for task in tasks:
        ds = build_dataset(
            task, snippets, size_cap=size, seed=seed, split_ratio=split,
            allow_missing_classes=allow_missing,
        )
        ds_path = out_dir / f"task_{task.value.lower()}.jsonl"
        write_dataset(ds, ds_path, corpus_sha256=corpus_sha)
        ds2, manifest_line = read_dataset(ds_path)
        emb = mock_embed(backend, ds2, n_layers=layers, dim=dim, seed=seed)
        emb.manifest_hash = dataset_manifest_hash(manifest_line)
        emb_path = out_dir / f"emb_{task.value.lower()}.cpeb"
        write_embeddings(emb, emb_path)
        config = ProbeConfig(seed=seed)
        if sizes:
            results = run_sample_curve(
                ds2, emb, sizes=[int(s) for s in sizes.split(",")], config=config, split_ratio=split
            )
        else:
            results = run_layerwise(ds2, emb, config=config)
        res_path = out_dir / f"results_{task.value.lower()}.csv"
        write_results(results, res_path)
        results_paths.append(str(res_path))
        labels.append(task.value)
        print(f"{task.value}: {len(ds.instances)} instances, {len(results.entries)} probe runs")

    merged = ProbeResults()
    for p in results_paths:
        merged.entries.extend(read_results(p).entries)
    label = cfg.get("label", backend.name)
    written = write_report([merged], [label], out_dir / "reports", policy=cfg.get("cell", "best-layer"))
    for p in written:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codeprobe",
        description="Probing-task pipeline for frozen code-model embeddings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-corpus", help="extract method snippets from a Java tree")
    p.add_argument("--root", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-tokens", type=int, default=5)
    p.add_argument("--max-tokens", type=int, default=2048)
    p.set_defaults(func=_cmd_build_corpus)

    p = sub.add_parser("build-task", help="build one probing-task dataset")
    p.add_argument("--task", required=True, choices=["len", "ast", "cpx", "typ"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=int, default=10000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--split", type=float, default=0.8)
    p.add_argument("--allow-missing-classes", action="store_true")
    p.set_defaults(func=_cmd_build_task)

    p = sub.add_parser("embed", help="generate mock embeddings for a dataset")
    p.add_argument("--backend", required=True, help="random | oracle | leak:<s>")
    p.add_argument("--task", required=True)
    p.add_argument("--layers", type=int, default=13)
    p.add_argument("--dim", type=int, default=768)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("probe", help="train/evaluate linear probes per layer")
    p.add_argument("--task", required=True)
    p.add_argument("--emb", required=True)
    p.add_argument("--layers", default="all", help="all | lo..hi | comma list")
    p.add_argument("--sizes", default="", help="comma list for the sample-size analysis")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("report", help="render tables and plots from results CSVs")
    p.add_argument("--results", required=True, help="comma-separated CSV paths")
    p.add_argument("--labels", default="")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--cell", default="best-layer", choices=["best-layer", "last-layer"])
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("inspect", help="print tokens, tags and complexity for one snippet")
    p.add_argument("--snippet", required=True)
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("gen-demo-corpus", help="write a synthetic Java corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-theme", type=int, default=5)
    p.add_argument("--per-complexity", type=int, default=6)
    p.add_argument("--per-length-bin", type=int, default=8)
    p.set_defaults(func=_cmd_gen_demo_corpus)

    p = sub.add_parser("pipeline", help="run the full chain from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except CodeProbeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
