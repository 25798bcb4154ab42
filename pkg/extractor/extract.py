#!/usr/bin/env python3
"""Extract frozen per-layer hidden states from a transformer checkpoint.

Usage:
    extract.py --model <checkpoint> --task task.jsonl --pooling mean|first \
               --out emb.cpeb --exclusions excl.jsonl
"""

import sys

from cpebextract.cli import main

if __name__ == "__main__":
    sys.exit(main())
