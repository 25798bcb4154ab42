"""Construction of the four class-balanced probing datasets.

LEN: five token-count bins. AST: per-token node tags (20 classes).
CPX: decision-point counts 0..9. TYP: valid vs misspelled-primitive snippets.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ._util import CodeProbeError, fnv1a64, mix64
from .corpus import MethodSnippet
from .syntax import (
    AST_CLASS_COUNT,
    LexError,
    ParseError,
    TokenKind,
    ast_tag_tokens,
    cyclomatic,
    lex,
    non_comment_count,
    parse_method,
    perturb_primitive_type,
)

LEN_BINS = 5
CPX_CLASSES = 10  # complexities 0..9
TYP_CLASSES = 2  # 0 = valid, 1 = invalid (perturbed)
MAX_AST_PER_SNIPPET = 3
DEFAULT_SIZE_CAP = 10_000
DEFAULT_SPLIT_RATIO = 0.8


class TaskKind(str, Enum):
    LEN = "LEN"
    AST = "AST"
    CPX = "CPX"
    TYP = "TYP"


TASK_CLASS_COUNTS = {
    TaskKind.LEN: LEN_BINS,
    TaskKind.AST: AST_CLASS_COUNT,
    TaskKind.CPX: CPX_CLASSES,
    TaskKind.TYP: TYP_CLASSES,
}


class Split(str, Enum):
    Train = "train"
    Test = "test"


@dataclass(frozen=True)
class ProbingInstance:
    instance_id: int
    snippet_id: int
    text: str
    label: int
    split: Split
    focus_span: tuple[int, int] | None = None  # AST only: the tagged token


@dataclass
class TaskDataset:
    task: TaskKind
    instances: list[ProbingInstance]
    class_count: int
    seed: int
    dropped: dict[str, int] = field(default_factory=dict)

    def split_indices(self, split: Split) -> list[int]:
        return [i for i, inst in enumerate(self.instances) if inst.split == split]


def bin_length(token_count: int) -> int:
    """Token-count bin: [0,50) [50,100) [100,150) [150,200) [200,inf)."""
    if token_count < 1:
        raise CodeProbeError(f"token count must be >= 1, got {token_count}")
    return min(token_count // 50, LEN_BINS - 1)


def naive_baseline(dataset: TaskDataset) -> float:
    """Expected accuracy of uniform guessing on a balanced set."""
    return 1.0 / dataset.class_count


def naive_baseline_for(task: TaskKind) -> float:
    return 1.0 / TASK_CLASS_COUNTS[task]


@dataclass
class _Candidate:
    snippet_id: int
    text: str
    label: int
    disambiguator: int
    focus_span: tuple[int, int] | None = None


def _collect_candidates(
    task: TaskKind, snippets: list[MethodSnippet], seed: int, dropped: dict[str, int]
) -> list[_Candidate]:
    out: list[_Candidate] = []
    for s in snippets:
        try:
            tokens = lex(s.text)
        except LexError:
            dropped["lex_error"] = dropped.get("lex_error", 0) + 1
            continue
        if task == TaskKind.LEN:
            count = non_comment_count(tokens)
            if count < 1:
                dropped["empty"] = dropped.get("empty", 0) + 1
                continue
            out.append(_Candidate(s.id, s.text, bin_length(count), 0))
        elif task == TaskKind.TYP:
            per_snippet = random.Random(mix64(seed, s.id, 0x7159))
            perturbed = perturb_primitive_type(s.text, mix64(seed, s.id))
            if perturbed is None:
                dropped["no_primitive"] = dropped.get("no_primitive", 0) + 1
                continue
            # exactly one of {original, perturbed} per snippet
            if per_snippet.random() < 0.5:
                out.append(_Candidate(s.id, s.text, 0, 0))
            else:
                out.append(_Candidate(s.id, perturbed[0], 1, 1))
        else:
            try:
                tree = parse_method(tokens)
            except ParseError:
                dropped["parse_error"] = dropped.get("parse_error", 0) + 1
                continue
            if task == TaskKind.CPX:
                cpx = cyclomatic(tree)
                if cpx >= CPX_CLASSES:
                    dropped["complexity_gt_9"] = dropped.get("complexity_gt_9", 0) + 1
                    continue
                out.append(_Candidate(s.id, s.text, cpx, 0))
            else:  # AST
                tagged = ast_tag_tokens(tree)
                if not tagged:
                    dropped["no_taggable_tokens"] = dropped.get("no_taggable_tokens", 0) + 1
                    continue
                per_snippet = random.Random(mix64(seed, s.id, 0xA57))
                picks = per_snippet.sample(tagged, min(MAX_AST_PER_SNIPPET, len(tagged)))
                for tok_idx, tag in sorted(picks):
                    tok = tokens[tok_idx]
                    out.append(
                        _Candidate(s.id, s.text, int(tag), tok_idx, focus_span=tok.span)
                    )
    return out


def build_dataset(
    task: TaskKind,
    snippets: list[MethodSnippet],
    size_cap: int = DEFAULT_SIZE_CAP,
    seed: int = 0,
    split_ratio: float = DEFAULT_SPLIT_RATIO,
    allow_missing_classes: bool = False,
) -> TaskDataset:
    """Label snippets, balance classes by seeded downsampling, stratify the
    train/test split, and shuffle deterministically."""
    if not snippets:
        raise CodeProbeError("no snippets to build a dataset from")
    class_count = TASK_CLASS_COUNTS[task]
    if size_cap < class_count:
        raise CodeProbeError(
            f"size cap {size_cap} is smaller than the class count {class_count}"
        )
    dropped: dict[str, int] = {}
    candidates = _collect_candidates(task, snippets, seed, dropped)

    by_class: dict[int, list[_Candidate]] = {c: [] for c in range(class_count)}
    for cand in candidates:
        by_class[cand.label].append(cand)
    empty = [c for c in range(class_count) if not by_class[c]]
    if empty:
        if not allow_missing_classes:
            raise CodeProbeError(
                f"{task.value}: class {empty[0]} empty "
                f"(empty classes: {empty}); pass allow_missing_classes to shrink"
            )
        # relabel populated classes to a dense 0..k-1 range
        populated = [c for c in range(class_count) if by_class[c]]
        remap = {c: i for i, c in enumerate(populated)}
        by_class = {remap[c]: by_class[c] for c in populated}
        for new_label, cands in by_class.items():
            for cand in cands:
                cand.label = new_label
        class_count = len(populated)
        if class_count < 2:
            raise CodeProbeError(f"{task.value}: fewer than 2 populated classes")

    per_class = min(min(len(v) for v in by_class.values()), size_cap // class_count)
    rng = random.Random(mix64(seed, 0xD05E))
    instances: list[ProbingInstance] = []
    for c in range(class_count):
        cands = sorted(by_class[c], key=lambda x: (x.snippet_id, x.disambiguator))
        chosen = rng.sample(cands, per_class) if len(cands) > per_class else list(cands)
        chosen.sort(key=lambda x: (x.snippet_id, x.disambiguator))
        n_train = round(per_class * split_ratio)
        if split_ratio < 1.0 and per_class >= 2:
            n_train = min(n_train, per_class - 1)  # keep >= 1 test row per class
        order = list(range(len(chosen)))
        rng.shuffle(order)
        for rank, idx in enumerate(order):
            cand = chosen[idx]
            iid = fnv1a64(f"{task.value}\0{cand.snippet_id}\0{cand.disambiguator}")
            instances.append(
                ProbingInstance(
                    instance_id=iid,
                    snippet_id=cand.snippet_id,
                    text=cand.text,
                    label=cand.label,
                    split=Split.Train if rank < n_train else Split.Test,
                    focus_span=cand.focus_span,
                )
            )
    rng.shuffle(instances)
    return TaskDataset(
        task=task, instances=instances, class_count=class_count, seed=seed, dropped=dropped
    )


# ---------------------------------------------------------------------------
# Dataset file format (JSON Lines with a leading manifest line)
# ---------------------------------------------------------------------------


def dataset_manifest_line(ds: TaskDataset, corpus_sha256: str) -> str:
    manifest = {
        "manifest": True,
        "task": ds.task.value,
        "classes": ds.class_count,
        "seed": ds.seed,
        "count": len(ds.instances),
        "corpus_sha256": corpus_sha256,
        "length_unit": "lexer_tokens",
    }
    return json.dumps(manifest, ensure_ascii=False)


def dataset_manifest_hash(manifest_line: str) -> int:
    """FNV-1a of the manifest line; binds CPEB files to their dataset."""
    return fnv1a64(manifest_line)


def write_dataset(ds: TaskDataset, path: str | Path, corpus_sha256: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dataset_manifest_line(ds, corpus_sha256) + "\n")
        for inst in ds.instances:
            rec = {
                "iid": inst.instance_id,
                "sid": inst.snippet_id,
                "task": ds.task.value,
                "label": inst.label,
                "split": inst.split.value,
                "text": inst.text,
                "focus": list(inst.focus_span) if inst.focus_span else None,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_dataset(path: str | Path) -> tuple[TaskDataset, str]:
    """Returns (dataset, manifest line as written)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        try:
            manifest = json.loads(first)
        except json.JSONDecodeError as e:
            raise CodeProbeError(f"{path}: missing manifest line: {e}") from e
        if not manifest.get("manifest"):
            raise CodeProbeError(f"{path}: first line is not a manifest")
        task = TaskKind(manifest["task"])
        instances: list[ProbingInstance] = []
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            rec = json.loads(line)
            focus = rec.get("focus")
            instances.append(
                ProbingInstance(
                    instance_id=rec["iid"],
                    snippet_id=rec["sid"],
                    text=rec["text"],
                    label=rec["label"],
                    split=Split(rec["split"]),
                    focus_span=tuple(focus) if focus else None,
                )
            )
    if len(instances) != manifest["count"]:
        raise CodeProbeError(
            f"{path}: manifest count {manifest['count']} != {len(instances)} instances"
        )
    ds = TaskDataset(
        task=task, instances=instances, class_count=manifest["classes"], seed=manifest["seed"]
    )
    return ds, first


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
