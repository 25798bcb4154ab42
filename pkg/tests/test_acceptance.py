"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Scale used throughout: 2,000-instance class-balanced datasets per task,
13 mock layers, embedding dim 128, seed 42.
"""

import sys

import numpy as np
import pytest

from codeprobe._util import CodeProbeError
from codeprobe.cli import EXIT_OK, main
from codeprobe.devcorpus import generate_snippets
from codeprobe.embedstore import (
    EmbeddingSet,
    MockBackendKind,
    mock_embed,
    read_embeddings,
    write_embeddings,
)
from codeprobe.probe import (
    ProbeConfig,
    evaluate,
    run_layerwise,
    run_sample_curve,
    softmax_loss_grad,
    train_linear_probe,
)
from codeprobe.report import emit_table
from codeprobe.syntax import ast_tag_tokens, cyclomatic, lex, non_comment_count, parse_method
from codeprobe.tasks import (
    ProbingInstance,
    Split,
    TaskDataset,
    TaskKind,
    bin_length,
    build_dataset,
    naive_baseline_for,
)

N_LAYERS = 13
DIM = 128
SEED = 42
DATASET_SIZE = 2000
LEAK_STRENGTHS = [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.fixture
def report(capfd):
    """Prints one pass/fail line per criterion, bypassing output capture."""

    def _report(name: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        with capfd.disabled():
            print(f"[{status}] {name}{suffix}", file=sys.stderr, flush=True)

    return _report


@pytest.fixture(scope="module")
def accept_pool():
    return generate_snippets(seed=0, per_theme=150, per_complexity=220, per_length_bin=440)


@pytest.fixture(scope="module")
def accept_datasets(accept_pool):
    out = {}
    for task in TaskKind:
        ds = build_dataset(task, accept_pool, size_cap=DATASET_SIZE, seed=SEED)
        assert len(ds.instances) == DATASET_SIZE, task
        out[task] = ds
    return out


@pytest.fixture(scope="module")
def leak_accuracies(accept_datasets):
    """Per-layer test accuracies for every task and leak strength.

    Leak(0) is the random backend and Leak(1) is the oracle backend bit for
    bit, so these curves cover the random/oracle criteria too.
    """
    config = ProbeConfig(seed=SEED)
    table: dict[tuple[TaskKind, float], list[float]] = {}
    for task, ds in accept_datasets.items():
        for s in LEAK_STRENGTHS:
            emb = mock_embed(MockBackendKind("leak", s), ds, N_LAYERS, DIM, seed=SEED)
            res = run_layerwise(ds, emb, config)
            table[(task, s)] = [e.test_accuracy for e in res.entries]
    return table


def test_naive_baseline_row(report):
    """Tables over balanced datasets show Naive exactly 20.00/5.00/10.00/50.00."""
    md, csv_text = emit_table([], [])
    ok = csv_text.splitlines()[1] == "Naive,20.00,5.00,10.00,50.00"
    ok = ok and "| Naive | 20.00 | 5.00 | 10.00 | 50.00 |" in md
    report("naive baselines 20.00/5.00/10.00/50.00 (exact)", ok)
    assert ok


def test_oracle_backend_every_layer(leak_accuracies, report):
    """Oracle backend: every layer's probe test accuracy >= 0.99 on all tasks."""
    worst = min(min(leak_accuracies[(t, 1.0)]) for t in TaskKind)
    ok = worst >= 0.99
    report("oracle backend: all layers/tasks >= 0.99", ok, f"worst layer {worst:.4f}")
    assert ok


def test_random_backend_chance_level(leak_accuracies, report):
    """Random backend: every layer within +/-0.05 of the naive baseline."""
    worst_dev = 0.0
    for task in TaskKind:
        base = naive_baseline_for(task)
        for acc in leak_accuracies[(task, 0.0)]:
            worst_dev = max(worst_dev, abs(acc - base))
    ok = worst_dev <= 0.05
    report(
        "random backend: all layers within 0.05 of chance", ok, f"worst dev {worst_dev:.4f}"
    )
    assert ok


def test_leak_monotonicity(leak_accuracies, report):
    """Mean-over-layers accuracy is non-decreasing in leak strength (tol 0.01)."""
    worst_drop = 0.0
    for task in TaskKind:
        means = [float(np.mean(leak_accuracies[(task, s)])) for s in LEAK_STRENGTHS]
        for a, b in zip(means, means[1:]):
            worst_drop = max(worst_drop, a - b)
    ok = worst_drop <= 0.01
    report(
        "leak strength sweep: mean accuracy non-decreasing", ok, f"worst drop {worst_drop:.4f}"
    )
    assert ok


def _synthetic_balanced_dataset(
    task: TaskKind, class_count: int, per_class_train: int, per_class_test: int, seed: int
) -> TaskDataset:
    """Balanced dataset built directly (no corpus) for the large-sample run."""
    instances = []
    iid = 1
    for c in range(class_count):
        for k in range(per_class_train + per_class_test):
            split = Split.Train if k < per_class_train else Split.Test
            instances.append(
                ProbingInstance(
                    instance_id=iid, snippet_id=iid, text="", label=c, split=split
                )
            )
            iid += 1
    return TaskDataset(task=task, instances=instances, class_count=class_count, seed=seed)


def test_sample_size_behavior(report):
    """Leak(0.5): layer-to-layer std at 10,000 <= at 100 (tol 0.005) and
    per-layer accuracy non-decreasing over 100 -> 1,000 -> 10,000 (tol 0.01)."""
    ds = _synthetic_balanced_dataset(
        TaskKind.LEN, class_count=5, per_class_train=2000, per_class_test=500, seed=SEED
    )
    emb = mock_embed(MockBackendKind("leak", 0.5), ds, N_LAYERS, DIM, seed=SEED)
    res = run_sample_curve(ds, emb, sizes=[100, 1000, 10_000], config=ProbeConfig(seed=SEED))
    acc = {
        size: [e.test_accuracy for e in sorted(res.filter(train_size=size), key=lambda e: e.layer)]
        for size in (100, 1000, 10_000)
    }
    std_small = float(np.std(acc[100]))
    std_large = float(np.std(acc[10_000]))
    flattened = std_large <= std_small + 0.005
    worst_drop = 0.0
    for layer in range(N_LAYERS):
        for a, b in ((acc[100][layer], acc[1000][layer]), (acc[1000][layer], acc[10_000][layer])):
            worst_drop = max(worst_drop, a - b)
    monotone = worst_drop <= 0.01
    ok = flattened and monotone
    report(
        "sample-size: std flattens and per-layer accuracy grows",
        ok,
        f"std {std_small:.4f}->{std_large:.4f}, worst drop {worst_drop:.4f}",
    )
    assert ok


def test_probe_correctness(report):
    """Analytic gradient matches central differences; separable data fits;
    full-batch loss never increases."""
    rng = np.random.default_rng(7)
    max_rel = 0.0
    for _ in range(20):
        n, dim, classes = 10, 4, 3
        x = rng.standard_normal((n, dim))
        y = rng.integers(0, classes, n)
        w = 0.5 * rng.standard_normal((classes, dim))
        b = 0.5 * rng.standard_normal(classes)
        _, gw, gb = softmax_loss_grad(w, b, x, y, 1e-3)
        h = 1e-6
        for arr, grad in ((w, gw), (b, gb)):
            flat = arr.reshape(-1)
            for k in range(flat.size):
                orig = flat[k]
                flat[k] = orig + h
                lp, _, _ = softmax_loss_grad(w, b, x, y, 1e-3)
                flat[k] = orig - h
                lm, _, _ = softmax_loss_grad(w, b, x, y, 1e-3)
                flat[k] = orig
                numeric = (lp - lm) / (2 * h)
                analytic = grad.reshape(-1)[k]
                denom = max(abs(numeric), abs(analytic), 1e-8)
                max_rel = max(max_rel, abs(numeric - analytic) / denom)
    grad_ok = max_rel <= 1e-4

    centers = 10.0 * rng.standard_normal((4, 6))
    xs = np.vstack([c + 0.05 * rng.standard_normal((25, 6)) for c in centers])
    ys = np.repeat(np.arange(4), 25)
    model = train_linear_probe(xs, ys)
    fit_ok = evaluate(model, xs, ys) == 1.0
    loss_ok = bool((np.diff(model.losses) <= 1e-9).all())

    ok = grad_ok and fit_ok and loss_ok
    report(
        "probe: gradient check, separable fit, monotone loss",
        ok,
        f"max grad rel err {max_rel:.2e}",
    )
    assert ok


def test_static_analysis_oracle(hand_labeled, report):
    """Hand-labeled methods: exact cyclomatic counts, AST tags, LEN bins."""
    assert len(hand_labeled) >= 20
    mismatches = []
    for rec in hand_labeled:
        toks = lex(rec["code"])
        tree = parse_method(toks)
        if cyclomatic(tree) != rec["cyclomatic"]:
            mismatches.append((rec["name"], "cyclomatic"))
        got_tags = [[toks[i].text, tag.name] for i, tag in ast_tag_tokens(tree)]
        if got_tags != rec["tags"]:
            mismatches.append((rec["name"], "tags"))
        count = non_comment_count(toks)
        if count != rec["token_count"] or bin_length(count) != bin_length(rec["token_count"]):
            mismatches.append((rec["name"], "length"))
    ok = not mismatches
    report(
        f"static analysis vs {len(hand_labeled)} hand-labeled methods",
        ok,
        f"{len(mismatches)} mismatches",
    )
    assert ok, mismatches


def test_pipeline_determinism(tmp_path, report):
    """Two identical pipeline runs produce byte-identical artifacts."""
    demo = tmp_path / "demo"
    assert main(["gen-demo-corpus", "--out", str(demo), "--seed", "0"]) == EXIT_OK
    outputs = []
    for run in ("a", "b"):
        out_dir = tmp_path / run
        cfg = tmp_path / f"{run}.cfg"
        cfg.write_text(
            f"corpus_root = {demo}\nout_dir = {out_dir}\nbackend = leak:0.5\n"
            "layers = 3\ndim = 32\nsize = 60\nseed = 5\ntasks = len,ast,cpx,typ\n"
            "label = demo\n",
            encoding="utf-8",
        )
        assert main(["pipeline", "--config", str(cfg)]) == EXIT_OK
        outputs.append(out_dir)
    a, b = outputs
    rels = sorted(
        p.relative_to(a)
        for p in a.rglob("*")
        if p.is_file() and not p.name.endswith(".manifest.json")
    )
    checked = 0
    diffs = []
    for rel in rels:
        checked += 1
        if (a / rel).read_bytes() != (b / rel).read_bytes():
            diffs.append(str(rel))
    ok = checked >= 13 and not diffs  # corpus + 4x(dataset, cpeb, csv) + report files
    report("pipeline determinism: byte-identical reruns", ok, f"{checked} files compared")
    assert ok, diffs


def test_cpeb_format(tmp_path, report):
    """CPEB round-trip is bitwise lossless; bad magic and truncation rejected."""
    rng = np.random.default_rng(3)
    emb = EmbeddingSet(
        n_layers=4,
        dim=16,
        instance_ids=rng.integers(1, 2**63, 50, dtype=np.uint64),
        vectors=rng.standard_normal((4, 50, 16)).astype(np.float32),
        manifest_hash=12345,
    )
    path = tmp_path / "e.cpeb"
    write_embeddings(emb, path)
    back = read_embeddings(path)
    lossless = (
        back.vectors.tobytes() == emb.vectors.tobytes()
        and np.array_equal(back.instance_ids, emb.instance_ids)
        and (back.n_layers, back.dim, back.manifest_hash) == (4, 16, 12345)
    )

    bad = tmp_path / "bad.cpeb"
    bad.write_bytes(b"JUNK" + path.read_bytes()[4:])
    try:
        read_embeddings(bad)
        magic_ok = False
    except CodeProbeError as e:
        magic_ok = "not a CPEB file" in str(e)

    data = path.read_bytes()
    trunc = tmp_path / "trunc.cpeb"
    trunc.write_bytes(data[: len(data) - 7])
    try:
        read_embeddings(trunc)
        trunc_ok = False
    except CodeProbeError as e:
        trunc_ok = f"truncated at byte {len(data) - 7}" in str(e)

    ok = lossless and magic_ok and trunc_ok
    report("CPEB format: lossless round-trip, corrupt/truncated rejected", ok)
    assert ok
