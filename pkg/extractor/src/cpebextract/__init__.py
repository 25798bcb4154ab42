"""Frozen hidden-state extraction from transformer checkpoints to CPEB files.

This package talks to the probing toolkit only through its documented file
formats: it reads probing-task JSONL datasets and writes CPEB v1 embedding
files. It does not import the toolkit itself.
"""

from .cpeb import write_cpeb
from .dataset import fnv1a64, read_task_file
from .extraction import (
    ExtractionError,
    ExtractionSpec,
    Pooling,
    align_subwords,
    extract,
    load_checkpoint,
    run_extraction,
)

__version__ = "0.1.0"

__all__ = [
    "ExtractionError",
    "ExtractionSpec",
    "Pooling",
    "align_subwords",
    "extract",
    "fnv1a64",
    "load_checkpoint",
    "read_task_file",
    "run_extraction",
    "write_cpeb",
]
