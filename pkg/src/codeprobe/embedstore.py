"""CPEB embedding tensor files and deterministic mock embedding backends.

CPEB v1 layout (all integers little-endian):

    offset  size  field
    0       4     magic "CPEB"
    4       4     u32 version = 1
    8       4     u32 n_layers (including layer 0, the encoding layer)
    12      4     u32 dim
    16      8     u64 n_instances
    24      8     u64 dataset manifest hash (FNV-1a of the manifest line)
    32      8     reserved, zero
    40      8*n   u64 instance ids, dataset order
    ...     4*L*n*d   f32 payload, layer-major: [layer][instance][dim]

Total size is therefore 40 + 8*n + 4*L*n*d bytes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import CodeProbeError, mix64
from .tasks import TaskDataset

MAGIC = b"CPEB"
VERSION = 1
HEADER_SIZE = 40
_HEADER = struct.Struct("<4sIIIQQQ")


@dataclass
class EmbeddingSet:
    n_layers: int
    dim: int
    instance_ids: np.ndarray  # u64, shape (n,)
    vectors: np.ndarray  # f32, shape (n_layers, n, dim)
    manifest_hash: int = 0

    @property
    def n_instances(self) -> int:
        return int(self.instance_ids.shape[0])

    def validate(self) -> None:
        if self.n_layers < 1:
            raise CodeProbeError("n_layers must be >= 1")
        if self.vectors.shape != (self.n_layers, self.n_instances, self.dim):
            raise CodeProbeError(
                f"vector shape {self.vectors.shape} does not match "
                f"({self.n_layers}, {self.n_instances}, {self.dim})"
            )
        if not np.isfinite(self.vectors).all():
            raise CodeProbeError("embedding vectors contain non-finite values")


def write_embeddings(emb: EmbeddingSet, path: str | Path) -> None:
    emb.validate()
    header = _HEADER.pack(
        MAGIC, VERSION, emb.n_layers, emb.dim, emb.n_instances, emb.manifest_hash, 0
    )
    assert len(header) == HEADER_SIZE
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(emb.instance_ids, dtype="<u8").tobytes())
            fh.write(np.ascontiguousarray(emb.vectors, dtype="<f4").tobytes())
    except OSError as e:
        raise CodeProbeError(f"cannot write embeddings to {path}: {e}") from e


def read_embeddings(path: str | Path, expect_manifest_hash: int | None = None) -> EmbeddingSet:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise CodeProbeError(f"cannot read embeddings from {path}: {e}") from e
    if len(data) < HEADER_SIZE or data[:4] != MAGIC:
        raise CodeProbeError(f"{path}: not a CPEB file")
    magic, version, n_layers, dim, n, manifest_hash, _reserved = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise CodeProbeError(f"{path}: unsupported CPEB version {version}")
    ids_end = HEADER_SIZE + 8 * n
    payload_end = ids_end + 4 * n_layers * n * dim
    if len(data) < payload_end:
        raise CodeProbeError(f"{path}: truncated at byte {len(data)}")
    ids = np.frombuffer(data, dtype="<u8", count=n, offset=HEADER_SIZE).copy()
    vectors = (
        np.frombuffer(data, dtype="<f4", count=n_layers * n * dim, offset=ids_end)
        .reshape(n_layers, n, dim)
        .copy()
    )
    if expect_manifest_hash is not None and expect_manifest_hash != manifest_hash:
        raise CodeProbeError(
            f"{path}: dataset manifest hash mismatch "
            f"(file {manifest_hash:#x}, expected {expect_manifest_hash:#x})"
        )
    return EmbeddingSet(
        n_layers=n_layers, dim=dim, instance_ids=ids, vectors=vectors, manifest_hash=manifest_hash
    )


def check_alignment(emb: EmbeddingSet, dataset: TaskDataset) -> None:
    ids = [inst.instance_id for inst in dataset.instances]
    if emb.n_instances != len(ids):
        raise CodeProbeError(
            f"instance count mismatch: embeddings {emb.n_instances}, dataset {len(ids)}"
        )
    file_ids = emb.instance_ids.astype(np.uint64)
    for k, iid in enumerate(ids):
        if int(file_ids[k]) != iid:
            raise CodeProbeError(f"instance order mismatch at index {k}")


# ---------------------------------------------------------------------------
# Mock backends
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MockBackendKind:
    name: str  # "random" | "oracle" | "leak"
    strength: float = 0.0

    def __post_init__(self):
        if self.name not in ("random", "oracle", "leak"):
            raise CodeProbeError(f"unknown mock backend {self.name!r}")
        if not 0.0 <= self.strength <= 1.0:
            raise CodeProbeError(f"leak strength {self.strength} outside [0, 1]")

    @classmethod
    def parse(cls, spec: str) -> "MockBackendKind":
        """Parse 'random', 'oracle' or 'leak:<s>'."""
        if spec in ("random", "oracle"):
            return cls(spec)
        if spec.startswith("leak:"):
            return cls("leak", float(spec.split(":", 1)[1]))
        raise CodeProbeError(f"unknown backend spec {spec!r}")


def _instance_noise(seed: int, layer: int, instance_id: int, dim: int) -> np.ndarray:
    """Counter-based generator keyed by (seed, layer, instance): identical
    output regardless of generation order or thread count."""
    key = mix64(seed, layer, instance_id)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.standard_normal(dim, dtype=np.float32)


def mock_embed(
    kind: MockBackendKind,
    dataset: TaskDataset,
    n_layers: int,
    dim: int,
    seed: int,
) -> EmbeddingSet:
    """Deterministic synthetic embeddings for testing the probe pipeline.

    random: i.i.d. standard normal. oracle: one-hot of the label in the
    first class_count coordinates plus 0.01-scale noise elsewhere.
    leak(s): s*oracle + (1-s)*random.
    """
    c = dataset.class_count
    if kind.name != "random" and dim < c:
        raise CodeProbeError(f"oracle backend needs dim >= class count ({dim} < {c})")
    n = len(dataset.instances)
    vectors = np.empty((n_layers, n, dim), dtype=np.float32)
    ids = np.array([inst.instance_id for inst in dataset.instances], dtype=np.uint64)
    labels = [inst.label for inst in dataset.instances]
    s = {"random": 0.0, "oracle": 1.0, "leak": kind.strength}[kind.name]
    for layer in range(n_layers):
        for i in range(n):
            noise = _instance_noise(seed, layer, int(ids[i]), dim)
            if s == 0.0:
                vectors[layer, i] = noise
                continue
            oracle = np.zeros(dim, dtype=np.float32)
            oracle[labels[i]] = 1.0
            oracle[c:] = 0.01 * noise[c:]
            vectors[layer, i] = s * oracle + (1.0 - s) * noise
    return EmbeddingSet(n_layers=n_layers, dim=dim, instance_ids=ids, vectors=vectors)
