"""Command line entry point for hidden-state extraction.

    extract.py --model <checkpoint> --task task.jsonl --pooling mean|first \
               --out emb.cpeb --exclusions excl.jsonl
"""

from __future__ import annotations

import argparse
import sys

from .extraction import ExtractionError, ExtractionSpec, Pooling, extract

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpeb-extract",
        description="Extract frozen per-layer hidden states to a CPEB file",
    )
    parser.add_argument("--model", required=True, help="checkpoint name or local path")
    parser.add_argument("--task", required=True, help="probing-task dataset JSONL")
    parser.add_argument("--pooling", choices=["mean", "first"], default="mean")
    parser.add_argument("--out", required=True, help="CPEB output path")
    parser.add_argument("--exclusions", required=True, help="exclusion sidecar JSONL")
    parser.add_argument("--max-tokens", type=int, default=512)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument(
        "--expect-layers", type=int, default=None,
        help="fail unless checkpoint layers + 1 equals this",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    spec = ExtractionSpec(
        model=args.model,
        pooling=Pooling(args.pooling),
        max_model_tokens=args.max_tokens,
        device=args.device,
        batch_size=args.batch_size,
        expect_layers=args.expect_layers,
    )
    try:
        manifest = extract(spec, args.task, args.out, args.exclusions)
    except (ExtractionError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    print(
        f"{manifest['n_layers']} layers x {manifest['instances']} x {manifest['dim']} "
        f"-> {args.out} ({manifest['excluded']} excluded)"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
