"""Tour of the CPEB embedding file format: write, inspect, round-trip, and
the errors raised for corrupt files.

Run with:  python3 demos/demo_cpeb_format.py
"""

import struct
import tempfile
from pathlib import Path

import numpy as np

from codeprobe._util import CodeProbeError
from codeprobe.embedstore import EmbeddingSet, read_embeddings, write_embeddings


def main() -> None:
    rng = np.random.default_rng(0)
    emb = EmbeddingSet(
        n_layers=3,
        dim=8,
        instance_ids=np.arange(100, 105, dtype=np.uint64),
        vectors=rng.standard_normal((3, 5, 8)).astype(np.float32),
        manifest_hash=0xC0FFEE,
    )

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "demo.cpeb"
        write_embeddings(emb, path)
        data = path.read_bytes()

        # 40-byte header: magic, version, n_layers, dim, n, manifest hash,
        # reserved — then u64 ids and a layer-major f32 payload.
        magic, version, n_layers, dim, n, mhash, _ = struct.unpack_from("<4sIIIQQQ", data)
        print(f"file size: {len(data)} bytes "
              f"(= 40 + 8*{n} + 4*{n_layers}*{n}*{dim})")
        print(f"header: magic={magic!r} version={version} layers={n_layers} "
              f"dim={dim} instances={n} manifest_hash={mhash:#x}")

        back = read_embeddings(path)
        print(f"round-trip bitwise identical: "
              f"{back.vectors.tobytes() == emb.vectors.tobytes()}")
        print()

        bad = Path(tmp) / "bad.cpeb"
        bad.write_bytes(b"JUNK" + data[4:])
        try:
            read_embeddings(bad)
        except CodeProbeError as e:
            print(f"corrupt magic   -> {e}")

        trunc = Path(tmp) / "trunc.cpeb"
        trunc.write_bytes(data[:-9])
        try:
            read_embeddings(trunc)
        except CodeProbeError as e:
            print(f"truncated file  -> {e}")


if __name__ == "__main__":
    main()
