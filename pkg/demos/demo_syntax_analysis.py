"""Walk through the static-analysis layer: lexing, parsing, per-token AST
tags, cyclomatic complexity, and the primitive-type perturbation.

Run with:  python3 demos/demo_syntax_analysis.py
"""

from codeprobe.syntax import (
    ast_tag_tokens,
    cyclomatic,
    lex,
    non_comment_count,
    parse_method,
    perturb_primitive_type,
)

SNIPPET = """\
int clamp(int value, int lo, int hi) {
    // keep value inside [lo, hi]
    if (value < lo) { return lo; }
    if (value > hi) { return hi; }
    return value;
}"""


def main() -> None:
    print("source method:")
    print(SNIPPET)
    print()

    tokens = lex(SNIPPET)
    print(f"{len(tokens)} tokens, {non_comment_count(tokens)} excluding comments")
    print()

    # Every non-separator, non-comment token is tagged with its innermost
    # enclosing AST node; that tag is the label of the AST probing task.
    tree = parse_method(tokens)
    tags = dict(ast_tag_tokens(tree))
    print("token tags (innermost enclosing node):")
    for i, tok in enumerate(tokens):
        tag = tags.get(i)
        print(f"  {tok.text!r:12}  {tag.name if tag is not None else '-'}")
    print()

    # Decision points: 2 ifs -> complexity 2. Straight-line code is 0.
    print(f"cyclomatic complexity: {cyclomatic(tree)}")
    print()

    # The TYP task perturbs one primitive-type keyword by swapping two
    # adjacent characters, turning it into a plain identifier.
    mutated, rec = perturb_primitive_type(SNIPPET, seed=1)
    print(f"perturbation: {rec.original!r} -> {rec.mutated!r} "
          f"at offset {rec.snippet_offset}")
    print(mutated.splitlines()[0])


if __name__ == "__main__":
    main()
