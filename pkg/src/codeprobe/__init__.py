"""codeprobe: probing tasks for frozen code-model embeddings.

Builds four probing datasets from Java method snippets (length bins, AST
node tags, cyclomatic complexity, invalid-type detection), trains linear
probes per model layer, and renders layer/sample-size analyses.
"""

__version__ = "0.1.0"

from .corpus import MethodSnippet, SourceFile, build_corpus, extract_methods, scan_sources
from .embedstore import EmbeddingSet, MockBackendKind, mock_embed, read_embeddings, write_embeddings
from .probe import ProbeConfig, ProbeModel, ProbeResults, evaluate, run_layerwise, run_sample_curve, train_linear_probe
from .syntax import AstTag, SyntaxTree, Token, TokenKind, ast_tag_tokens, cyclomatic, lex, parse_method, perturb_primitive_type
from .report import emit_layer_plot, emit_table, write_report
from .tasks import ProbingInstance, Split, TaskDataset, TaskKind, bin_length, build_dataset, naive_baseline

__all__ = [
    "AstTag",
    "EmbeddingSet",
    "MethodSnippet",
    "MockBackendKind",
    "ProbeConfig",
    "ProbeModel",
    "ProbeResults",
    "ProbingInstance",
    "SourceFile",
    "Split",
    "SyntaxTree",
    "TaskDataset",
    "TaskKind",
    "Token",
    "TokenKind",
    "ast_tag_tokens",
    "bin_length",
    "build_corpus",
    "build_dataset",
    "cyclomatic",
    "emit_layer_plot",
    "emit_table",
    "evaluate",
    "extract_methods",
    "lex",
    "mock_embed",
    "naive_baseline",
    "parse_method",
    "perturb_primitive_type",
    "read_embeddings",
    "run_layerwise",
    "run_sample_curve",
    "scan_sources",
    "train_linear_probe",
    "write_embeddings",
    "write_report",
]
