"""Build all four probing-task datasets from a synthetic Java corpus and
look at their label distributions.

Run with:  python3 demos/demo_build_datasets.py
"""

from collections import Counter

from codeprobe.devcorpus import generate_snippets
from codeprobe.tasks import TaskKind, build_dataset, naive_baseline


def main() -> None:
    # 200 synthetic methods covering every label of every task.
    snippets = generate_snippets(seed=0)
    print(f"corpus: {len(snippets)} method snippets")
    print()

    for task in TaskKind:
        ds = build_dataset(task, snippets, size_cap=200, seed=7)
        counts = Counter(inst.label for inst in ds.instances)
        train = sum(1 for i in ds.instances if i.split.value == "train")
        print(f"{task.value}: {len(ds.instances)} instances, "
              f"{ds.class_count} classes, {train} train, "
              f"naive baseline {100 * naive_baseline(ds):.2f}%")
        print(f"  per-class counts: {dict(sorted(counts.items()))}")
        if ds.dropped:
            print(f"  dropped during labeling: {ds.dropped}")
        sample = ds.instances[0]
        first_line = sample.text.splitlines()[0][:70]
        print(f"  example (label {sample.label}): {first_line}")
        print()


if __name__ == "__main__":
    main()
