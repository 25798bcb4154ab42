"""Deterministic synthetic Java corpus generation.

Produces method snippets that collectively populate every label of every
probing task: all 20 node tags, complexities 0..9, all five length bins,
and plenty of primitive-type occurrences for the invalid-type task. Used
by the test suite and for the bundled demo corpus.
"""

from __future__ import annotations

import random
from pathlib import Path

from ._util import mix64
from .corpus import MethodSnippet, snippet_id

_NOUNS = ["count", "total", "index", "value", "state", "score", "width", "depth", "limit"]
_TYPES = ["Widget", "Record", "Buffer", "Config", "Handle", "Stream"]


def _rn(rng: random.Random) -> str:
    return rng.choice(_NOUNS) + str(rng.randrange(10))


def _rt(rng: random.Random) -> str:
    return rng.choice(_TYPES)


def _prim_filler(rng: random.Random) -> str:
    return f"int {_rn(rng)} = {rng.randrange(100)};"


def _theme_bodies(rng: random.Random) -> dict[str, str]:
    a, b, c, d = _rn(rng), _rn(rng), _rn(rng), _rn(rng)
    t = _rt(rng)
    return {
        "method_declaration": "",
        "formal_parameter": "",  # parameters added in the signature
        "local_variable": f"{t} {a} = {b}; {t} {c} = {d};",
        "assignment": f"{a} = {b}; {c} = {d};",
        "invocation": f"{a}(); {b}(); {c}();",
        "field_access": f"return {a}.{b}.{c}.{d};",
        "array_access": f"return {a}[{b}][{c}];",
        "if_statement": f"if ({a}) {{ }} else if ({b}) {{ }}",
        "for_statement": f"for (; {a}; ) {{ break; }}",
        "while_statement": f"while ({a}) {{ break; }}",
        "do_statement": f"do {{ }} while ({a});",
        "switch_statement": f"switch ({a}) {{ case 1: break; default: break; }}",
        "try_statement": f"try {{ }} catch ({t} {a}) {{ }}",
        "return_statement": f"return {a};",
        "throw_statement": f"throw {a};",
        "binary_expression": f"{a} = {b} + {c} + {d};",
        "unary_expression": f"{a} = -{b}; {c}++;",
        "cast_expression": f"({t}) {a}; ({t}) {b}; ({t}) {c}; ({t}) {d}; {a} = ({t}) {b};",
        "literal": f"{a} = 137; {b} = 2048; return 42;",
        "type_reference": f"{t}<{_rt(rng)}> {a}; {t}[] {b};",
    }


def _method(name: str, body: str, params: str = "") -> str:
    return f"public void {name}({params}) {{ {body} }}"


def theme_methods(rng: random.Random, per_theme: int) -> list[str]:
    out: list[str] = []
    for k in range(per_theme):
        themes = _theme_bodies(rng)
        for i, (theme, body) in enumerate(themes.items()):
            if k % 2 == 1:
                body = f"{_prim_filler(rng)} {body}"
            params = ""
            if theme == "formal_parameter":
                params = ", ".join(f"{_rt(rng)} {_rn(rng)}" for _ in range(4))
            if theme == "return_statement":
                out.append(f"public Object m{theme}{k}() {{ {body} }}")
            else:
                out.append(_method(f"m{theme}{k}", body, params))
    return out


def complexity_method(rng: random.Random, name: str, complexity: int) -> str:
    """Exactly `complexity` decision points, always contains primitives."""
    parts = [f"int {_rn(rng)} = {rng.randrange(50)};"]
    forms = [
        "if (s > {k}) {{ s = s + 1; }}",
        "while (s < {k}) {{ s = s + 2; }}",
        "if (s == {k}) {{ s = 0; }}",
    ]
    for j in range(complexity):
        parts.append(forms[j % len(forms)].format(k=rng.randrange(9)))
    body = "int s = 0; " + " ".join(parts)
    return _method(name, body)


def length_method(rng: random.Random, name: str, length_bin: int) -> str:
    """Non-comment token count inside the stated 50-token bin."""
    low = length_bin * 50
    high = low + 49 if length_bin < 4 else low + 300
    target = rng.randrange(max(low, 8), high + 1)
    # header 'public void name ( ) { }' is 8 tokens; each filler adds 5
    k = max(0, (target - 8) // 5)
    body = " ".join(f"int f{j} = {j};" for j in range(k))
    return _method(name, body)


def generate_method_texts(
    seed: int = 0,
    per_theme: int = 5,
    per_complexity: int = 6,
    per_length_bin: int = 8,
) -> list[str]:
    rng = random.Random(mix64(seed, 0xC0DE))
    methods = theme_methods(rng, per_theme)
    for c in range(10):
        for j in range(per_complexity):
            methods.append(complexity_method(rng, f"cpx{c}x{j}", c))
    for b in range(5):
        for j in range(per_length_bin):
            methods.append(length_method(rng, f"len{b}x{j}", b))
    return methods


def generate_snippets(
    seed: int = 0,
    per_theme: int = 5,
    per_complexity: int = 6,
    per_length_bin: int = 8,
    project: str = "synth",
) -> list[MethodSnippet]:
    """In-memory snippet pool with stable ids."""
    texts = generate_method_texts(seed, per_theme, per_complexity, per_length_bin)
    snippets = []
    offset = 0
    for i, text in enumerate(texts):
        path = f"{project}/M{i:05d}.java"
        snippets.append(
            MethodSnippet(
                id=snippet_id(project, path, offset),
                text=text,
                project=project,
                path=path,
                char_span=(offset, offset + len(text)),
            )
        )
        offset += len(text) + 1
    return snippets


def write_corpus_tree(
    root: str | Path,
    seed: int = 0,
    per_theme: int = 5,
    per_complexity: int = 6,
    per_length_bin: int = 8,
    methods_per_file: int = 10,
    project: str = "synthproj",
) -> int:
    """Write the generated methods as .java class files under root/project.
    Returns the number of methods written."""
    texts = generate_method_texts(seed, per_theme, per_complexity, per_length_bin)
    root = Path(root) / project / "src"
    root.mkdir(parents=True, exist_ok=True)
    for f, start in enumerate(range(0, len(texts), methods_per_file)):
        chunk = texts[start : start + methods_per_file]
        body = "\n\n    ".join(chunk)
        content = f"public class Sample{f:04d} {{\n    {body}\n}}\n"
        (root / f"Sample{f:04d}.java").write_text(content, encoding="utf-8")
    return len(texts)
