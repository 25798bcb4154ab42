"""CPEB v1 writer (little-endian, layer-major float32).

Layout: 40-byte header — magic "CPEB", u32 version=1, u32 n_layers, u32 dim,
u64 n_instances, u64 dataset-manifest hash, 8 reserved zero bytes — followed
by u64 instance ids in dataset order and the [layer][instance][dim] payload.
Total size: 40 + 8*n + 4*L*n*d bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"CPEB"
VERSION = 1
_HEADER = struct.Struct("<4sIIIQQQ")


def write_cpeb(
    path: str | Path,
    instance_ids: np.ndarray,
    vectors: np.ndarray,
    manifest_hash: int,
) -> None:
    """Write a (n_layers, n, dim) float32 tensor with aligned instance ids."""
    if vectors.ndim != 3:
        raise ValueError(f"expected a (n_layers, n, dim) tensor, got {vectors.shape}")
    n_layers, n, dim = vectors.shape
    if instance_ids.shape != (n,):
        raise ValueError(
            f"instance id count {instance_ids.shape} does not match {n} instances"
        )
    if not np.isfinite(vectors).all():
        raise ValueError("embedding vectors contain non-finite values")
    header = _HEADER.pack(MAGIC, VERSION, n_layers, dim, n, manifest_hash, 0)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(instance_ids, dtype="<u8").tobytes())
        fh.write(np.ascontiguousarray(vectors, dtype="<f4").tobytes())
