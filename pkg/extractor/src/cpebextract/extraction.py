"""Per-layer hidden-state extraction from a frozen transformer checkpoint.

Layer 0 is the embedding (encoding) output; layers 1..L are the encoder
blocks, so a 12-layer checkpoint yields 13 layers. Sequence-level instances
are pooled over non-special positions (mean) or read from the first
position; instances with a focus span are pooled over the subword pieces
whose character offsets intersect the span. Sequences longer than the model
limit are right-truncated; an instance whose focus falls beyond truncation
(or resolves to zero pieces) is excluded and reported in a sidecar list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .cpeb import write_cpeb
from .dataset import TaskInstance, read_task_file


class ExtractionError(Exception):
    pass


class Pooling(str, Enum):
    MeanTokens = "mean"
    FirstPosition = "first"


@dataclass
class ExtractionSpec:
    model: str  # checkpoint name or local path
    pooling: Pooling = Pooling.MeanTokens
    max_model_tokens: int = 512
    device: str = "cpu"
    batch_size: int = 16
    expect_layers: int | None = None  # fatal if checkpoint layers + 1 differs


def load_checkpoint(spec: ExtractionSpec):
    """Load tokenizer and frozen model; returns (tokenizer, model)."""
    try:
        tokenizer = AutoTokenizer.from_pretrained(spec.model)
        model = AutoModel.from_pretrained(spec.model, output_hidden_states=True)
    except OSError as e:
        raise ExtractionError(f"cannot load checkpoint {spec.model!r}: {e}") from e
    if not tokenizer.is_fast:
        raise ExtractionError(
            f"{spec.model}: a fast tokenizer with offset mapping is required"
        )
    model.to(spec.device)
    model.eval()
    for param in model.parameters():
        param.requires_grad_(False)
    n_layers = model.config.num_hidden_layers + 1
    if spec.expect_layers is not None and n_layers != spec.expect_layers:
        raise ExtractionError(
            f"checkpoint has {model.config.num_hidden_layers} encoder layers "
            f"({n_layers} with the encoding layer), expected {spec.expect_layers}"
        )
    return tokenizer, model


def align_subwords(
    focus_span: tuple[int, int],
    offsets: list[tuple[int, int]],
    special_mask: list[int],
) -> list[int]:
    """Indices of non-special subword pieces overlapping a character span.

    An empty result means the focus token was truncated away or produced no
    pieces; callers exclude such instances.
    """
    start, end = focus_span
    picked = []
    for i, ((s, e), special) in enumerate(zip(offsets, special_mask)):
        if special or e <= s:
            continue
        if s < end and e > start:
            picked.append(i)
    return picked


def run_extraction(
    model,
    tokenizer,
    spec: ExtractionSpec,
    instances: list[TaskInstance],
) -> tuple[np.ndarray, np.ndarray, list[dict]]:
    """Extract pooled per-layer vectors for every instance, in order.

    Returns (instance_ids u64 (n,), vectors f32 (n_layers, n, dim),
    exclusion records). No gradients flow; the model is never updated.
    """
    n_layers = model.config.num_hidden_layers + 1
    dim = model.config.hidden_size
    kept_ids: list[int] = []
    kept_vecs: list[np.ndarray] = []  # each (n_layers, dim)
    exclusions: list[dict] = []

    for lo in range(0, len(instances), spec.batch_size):
        batch = instances[lo : lo + spec.batch_size]
        enc = tokenizer(
            [inst.text for inst in batch],
            truncation=True,
            max_length=spec.max_model_tokens,
            padding=True,
            return_offsets_mapping=True,
            return_special_tokens_mask=True,
            return_tensors="pt",
        )
        offsets = enc.pop("offset_mapping").tolist()
        special = enc.pop("special_tokens_mask").tolist()
        enc = {k: v.to(spec.device) for k, v in enc.items()}
        with torch.no_grad():
            out = model(**enc)
        # (n_layers, batch, seq, dim); layer 0 is the embedding output
        hidden = torch.stack(out.hidden_states).float()
        attention = enc["attention_mask"].bool()

        for b, inst in enumerate(batch):
            valid = attention[b].tolist()
            if inst.focus_span is not None:
                pieces = [
                    i
                    for i in align_subwords(inst.focus_span, offsets[b], special[b])
                    if valid[i]
                ]
                if not pieces:
                    exclusions.append(
                        {
                            "iid": inst.instance_id,
                            "reason": "focus span resolves to zero subword pieces",
                        }
                    )
                    continue
                vec = hidden[:, b, pieces, :].mean(dim=1)
            elif spec.pooling == Pooling.FirstPosition:
                vec = hidden[:, b, 0, :]
            else:
                content = [
                    i for i, (ok, sp) in enumerate(zip(valid, special[b])) if ok and not sp
                ]
                if not content:
                    exclusions.append(
                        {"iid": inst.instance_id, "reason": "no non-special tokens"}
                    )
                    continue
                vec = hidden[:, b, content, :].mean(dim=1)
            kept_ids.append(inst.instance_id)
            kept_vecs.append(vec.cpu().numpy().astype(np.float32))

    if not kept_ids:
        raise ExtractionError("every instance was excluded; nothing to write")
    ids = np.array(kept_ids, dtype=np.uint64)
    vectors = np.stack(kept_vecs, axis=1)  # (n_layers, n, dim)
    assert vectors.shape == (n_layers, len(kept_ids), dim)
    return ids, vectors, exclusions


def extract(
    spec: ExtractionSpec,
    task_path: str | Path,
    out_path: str | Path,
    exclusions_path: str | Path,
) -> dict:
    """File-to-file extraction; returns a summary manifest dict.

    Writes the CPEB file, the exclusion sidecar (JSONL, possibly empty), and
    a <out>.manifest.json recording the extraction settings.
    """
    task = read_task_file(task_path)
    tokenizer, model = load_checkpoint(spec)
    ids, vectors, exclusions = run_extraction(model, tokenizer, spec, task.instances)
    write_cpeb(out_path, ids, vectors, task.manifest_hash)
    with open(exclusions_path, "w", encoding="utf-8") as fh:
        for rec in exclusions:
            fh.write(json.dumps(rec) + "\n")
    manifest = {
        "model": spec.model,
        "task": task.task,
        "pooling": spec.pooling.value,
        "max_model_tokens": spec.max_model_tokens,
        "n_layers": int(vectors.shape[0]),
        "dim": int(vectors.shape[2]),
        "instances": int(vectors.shape[1]),
        "excluded": len(exclusions),
        "subword_alignment": "mean over pieces overlapping the focus span",
    }
    Path(str(out_path) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return manifest
