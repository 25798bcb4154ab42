"""Java corpus walking and method-level snippet extraction.

Methods are located with the lightweight lexer from `syntax`: a method or
constructor is `modifiers? type-or-void identifier ( params ) throws? { ... }`
found directly inside a class/interface/enum body at any nesting depth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ._util import CodeProbeError, fnv1a64
from .syntax import (
    JAVA_KEYWORDS,
    PRIMITIVE_TYPES,
    LexError,
    Token,
    TokenKind,
    lex,
)

DEFAULT_MIN_TOKENS = 5
DEFAULT_MAX_TOKENS = 2048

_MODIFIER_WORDS = frozenset(
    "public private protected static final abstract synchronized native strictfp default".split()
)


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str
    project: str


@dataclass(frozen=True)
class MethodSnippet:
    id: int  # u64, FNV-1a of "project\0path\0start-offset"
    text: str
    project: str
    path: str
    char_span: tuple[int, int]


@dataclass
class ScanResult:
    files: list[SourceFile]
    skipped_non_utf8: int


def snippet_id(project: str, path: str, start: int) -> int:
    return fnv1a64(f"{project}\0{path}\0{start}")


def scan_sources(root: str | Path) -> ScanResult:
    """Collect every .java file under root, sorted lexicographically by
    relative path. Non-UTF-8 files are skipped and counted."""
    root = Path(root)
    if not root.is_dir():
        raise CodeProbeError(f"corpus root does not exist or is not a directory: {root}")
    files: list[SourceFile] = []
    skipped = 0
    paths = sorted(p for p in root.rglob("*.java") if p.is_file())
    for p in paths:
        rel = p.relative_to(root).as_posix()
        try:
            text = p.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            skipped += 1
            continue
        project = rel.split("/", 1)[0] if "/" in rel else ""
        files.append(SourceFile(path=rel, text=text, project=project))
    files.sort(key=lambda f: f.path)
    return ScanResult(files=files, skipped_non_utf8=skipped)


def _match_method_header(tokens: list[Token], i: int) -> tuple[int, int] | None:
    """Try to match a method/constructor header starting at token i.

    Returns (header_start, body_open_index) where body_open_index points at
    the '{' opening the body, or None when no method starts here."""
    n = len(tokens)
    j = i
    # modifiers and marker annotations
    while j < n:
        t = tokens[j]
        if t.kind == TokenKind.Keyword and t.text in _MODIFIER_WORDS:
            j += 1
        elif t.text == "@" and j + 1 < n and tokens[j + 1].kind == TokenKind.Identifier:
            j += 2
            if j < n and tokens[j].text == "(":
                j = _skip_balanced(tokens, j, "(", ")")
                if j < 0:
                    return None
        else:
            break
    # optional type parameters
    if j < n and tokens[j].text == "<":
        j = _skip_balanced(tokens, j, "<", ">")
        if j < 0:
            return None
    # return type or constructor name
    if j >= n:
        return None
    t = tokens[j]
    if t.kind == TokenKind.Identifier and j + 1 < n and tokens[j + 1].text == "(":
        j += 1  # constructor
    else:
        if t.text == "void" or t.text in PRIMITIVE_TYPES:
            j += 1
        elif t.kind == TokenKind.Identifier:
            j += 1
            while j + 1 < n and tokens[j].text == "." and tokens[j + 1].kind == TokenKind.Identifier:
                j += 2
        else:
            return None
        if j < n and tokens[j].text == "<":
            j = _skip_balanced(tokens, j, "<", ">")
            if j < 0:
                return None
        while j + 1 < n and tokens[j].text == "[" and tokens[j + 1].text == "]":
            j += 2
        if j >= n or tokens[j].kind != TokenKind.Identifier:
            return None
        j += 1
    if j >= n or tokens[j].text != "(":
        return None
    j = _skip_balanced(tokens, j, "(", ")")
    if j < 0:
        return None
    while j + 1 < n and tokens[j].text == "[" and tokens[j + 1].text == "]":
        j += 2
    if j < n and tokens[j].text == "throws":
        j += 1
        while j < n and (tokens[j].kind == TokenKind.Identifier or tokens[j].text in (",", ".")):
            j += 1
    if j < n and tokens[j].text == "{":
        return (i, j)
    return None


def _skip_balanced(tokens: list[Token], i: int, open_t: str, close_t: str) -> int:
    """Index one past the token closing the group opened at i, or -1."""
    depth = 0
    n = len(tokens)
    while i < n:
        t = tokens[i]
        if t.text == open_t:
            depth += 1
        elif t.text == close_t:
            depth -= 1
            if depth == 0:
                return i + 1
        elif open_t == "<" and t.text in (">>", ">>>"):
            depth -= len(t.text)
            if depth <= 0:
                return i + 1
        elif open_t == "<" and (t.text in (";", "{", "}") or t.kind == TokenKind.StringLiteral):
            return -1
        i += 1
    return -1


@dataclass
class ExtractionWarning:
    path: str
    reason: str


def extract_methods(
    file: SourceFile,
    min_tokens: int = DEFAULT_MIN_TOKENS,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    warnings: list[ExtractionWarning] | None = None,
) -> list[MethodSnippet]:
    """Extract method/constructor snippets found inside type bodies, ordered
    by start offset. Files with lex errors or unbalanced braces are skipped
    with a warning record."""
    try:
        tokens = lex(file.text)
    except LexError as e:
        if warnings is not None:
            warnings.append(ExtractionWarning(file.path, str(e)))
        return []
    sig = [t for t in tokens if t.kind != TokenKind.Comment]
    if sum(1 for t in sig if t.text == "{") != sum(1 for t in sig if t.text == "}"):
        if warnings is not None:
            warnings.append(ExtractionWarning(file.path, "unbalanced braces"))
        return []

    snippets: list[MethodSnippet] = []
    n = len(sig)
    # depth_kind[d] tells whether the '{' opening depth d+1 belongs to a type
    # body ('type'), an array initializer / block / method body ('other')
    stack: list[str] = []
    pending_type = False
    i = 0
    while i < n:
        t = sig[i]
        if t.kind == TokenKind.Keyword and t.text in ("class", "interface", "enum"):
            pending_type = True
            i += 1
            continue
        if t.text == "{":
            stack.append("type" if pending_type else "other")
            pending_type = False
            i += 1
            continue
        if t.text == "}":
            if stack:
                stack.pop()
            i += 1
            continue
        if t.text == ";":
            pending_type = False
        if stack and stack[-1] == "type":
            m = _match_method_header(sig, i)
            if m is not None:
                hdr_start, body_open = m
                body_close = _skip_balanced(sig, body_open, "{", "}")
                if body_close > 0:
                    start_tok = sig[hdr_start]
                    end_tok = sig[body_close - 1]
                    count = body_close - hdr_start
                    if min_tokens <= count <= max_tokens:
                        start, end = start_tok.start, end_tok.end
                        snippets.append(
                            MethodSnippet(
                                id=snippet_id(file.project, file.path, start),
                                text=file.text[start:end],
                                project=file.project,
                                path=file.path,
                                char_span=(start, end),
                            )
                        )
                    # continue scanning inside the body for inner-class methods
                    i = body_open
                    continue
        i += 1
    snippets.sort(key=lambda s: s.char_span[0])
    return snippets


def build_corpus(
    root: str | Path,
    min_tokens: int = DEFAULT_MIN_TOKENS,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> tuple[list[MethodSnippet], list[ExtractionWarning], int]:
    """Scan root and extract snippets from every file. Returns
    (snippets, warnings, non-utf8 skip count)."""
    scan = scan_sources(root)
    warnings: list[ExtractionWarning] = []
    out: list[MethodSnippet] = []
    for f in scan.files:
        out.extend(extract_methods(f, min_tokens, max_tokens, warnings))
    out.sort(key=lambda s: (s.path, s.char_span[0]))
    return out, warnings, scan.skipped_non_utf8


def write_corpus(snippets: list[MethodSnippet], path: str | Path) -> None:
    """One JSON record per snippet; ids serialized as decimal strings."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in snippets:
            rec = {
                "id": str(s.id),
                "project": s.project,
                "path": s.path,
                "start": s.char_span[0],
                "end": s.char_span[1],
                "text": s.text,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_corpus(path: str | Path) -> list[MethodSnippet]:
    snippets: list[MethodSnippet] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CodeProbeError(f"{path}: bad JSON on line {lineno}: {e}") from e
            snippets.append(
                MethodSnippet(
                    id=int(rec["id"]),
                    text=rec["text"],
                    project=rec["project"],
                    path=rec["path"],
                    char_span=(rec["start"], rec["end"]),
                )
            )
    return snippets
