"""Probe mock embeddings layer by layer and render the report artifacts.

The leak backend interpolates between pure noise (s=0) and a label oracle
(s=1), so probe accuracy should climb with s — a built-in sanity check for
the whole pipeline.

Run with:  python3 demos/demo_probe_layers.py
"""

from pathlib import Path

import numpy as np

from codeprobe.devcorpus import generate_snippets
from codeprobe.embedstore import MockBackendKind, mock_embed
from codeprobe.probe import ProbeConfig, run_layerwise
from codeprobe.report import write_report
from codeprobe.tasks import TaskKind, build_dataset

OUT_DIR = Path(__file__).parent / "out" / "probe_layers"


def main() -> None:
    snippets = generate_snippets(seed=0)
    ds = build_dataset(TaskKind.LEN, snippets, size_cap=200, seed=7)
    config = ProbeConfig(seed=7)

    print("mean test accuracy over 4 mock layers (LEN task, 5 classes):")
    results_list, labels = [], []
    for s in (0.0, 0.5, 1.0):
        emb = mock_embed(MockBackendKind("leak", s), ds, n_layers=4, dim=32, seed=7)
        res = run_layerwise(ds, emb, config)
        mean_acc = float(np.mean([e.test_accuracy for e in res.entries]))
        print(f"  leak {s:.2f}: {100 * mean_acc:5.1f}%")
        results_list.append(res)
        labels.append(f"leak {s:.2f}")

    written = write_report(results_list, labels, OUT_DIR)
    print()
    print("report artifacts (accuracy table + per-task layer plots):")
    for p in written:
        print(f"  {p}")


if __name__ == "__main__":
    main()
