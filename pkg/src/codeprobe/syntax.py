"""Java method syntax analysis.

A hand-written lexer covering the full Java lexical grammar, a lightweight
recursive-descent parser for method bodies producing a 20-tag syntax tree,
per-token tag assignment, decision-point (cyclomatic) counting, and the
primitive-type misspelling perturbation used by the invalid-type task.

The parser is deliberately not a full Java grammar: constructs outside the
20-tag scheme (lambdas, annotations with arguments, generic bounds) are
consumed permissively and their tokens inherit the nearest enclosing node.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum

from ._util import CodeProbeError, mix64

# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------


class TokenKind(IntEnum):
    Keyword = 0
    Identifier = 1
    NumberLiteral = 2
    StringLiteral = 3
    CharLiteral = 4
    BoolLiteral = 5
    NullLiteral = 6
    Operator = 7
    Separator = 8
    Comment = 9


JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

PRIMITIVE_TYPES = ("byte", "short", "int", "long", "float", "double", "boolean", "char")

_MODIFIERS = frozenset(
    "public private protected static final abstract synchronized native strictfp default transient volatile".split()
)

# longest-match operator table; ':' and '?' are operators (ternary / labels)
_OPERATORS = sorted(
    [
        ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=",
        "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=",
        "<<", ">>", "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/",
        "&", "|", "^", "%",
    ],
    key=len,
    reverse=True,
)

_SEPARATOR_CHARS = "(){}[];,.@"


class LexError(CodeProbeError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def lex(text: str) -> list[Token]:
    """Tokenize Java source text. Comments are kept, whitespace dropped."""
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f":
            i += 1
            continue
        start = i
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            j = text.find("\n", i)
            j = n if j < 0 else j
            tokens.append(Token(TokenKind.Comment, text[start:j], start, j))
            i = j
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", start)
            j += 2
            tokens.append(Token(TokenKind.Comment, text[start:j], start, j))
            i = j
            continue
        if ch in "\"'":
            i += 1
            while i < n:
                c = text[i]
                if c == "\\":
                    i += 2
                    continue
                if c == "\n":
                    break
                if c == ch:
                    i += 1
                    break
                i += 1
            else:
                raise LexError(f"unterminated {'string' if ch == chr(34) else 'char'} literal", start)
            if i > n or i <= start + 1 or text[i - 1] != ch or (i - 1 < n and text[i - 1] == "\n"):
                raise LexError(f"unterminated {'string' if ch == chr(34) else 'char'} literal", start)
            kind = TokenKind.StringLiteral if ch == '"' else TokenKind.CharLiteral
            tokens.append(Token(kind, text[start:i], start, i))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            i = _scan_number(text, i)
            tokens.append(Token(TokenKind.NumberLiteral, text[start:i], start, i))
            continue
        if _is_ident_start(ch):
            i += 1
            while i < n and _is_ident_part(text[i]):
                i += 1
            word = text[start:i]
            if word in ("true", "false"):
                kind = TokenKind.BoolLiteral
            elif word == "null":
                kind = TokenKind.NullLiteral
            elif word in JAVA_KEYWORDS:
                kind = TokenKind.Keyword
            else:
                kind = TokenKind.Identifier
            tokens.append(Token(kind, word, start, i))
            continue
        if ch in _SEPARATOR_CHARS:
            if text.startswith("...", i):
                tokens.append(Token(TokenKind.Separator, "...", i, i + 3))
                i += 3
                continue
            tokens.append(Token(TokenKind.Separator, ch, i, i + 1))
            i += 1
            continue
        if text.startswith("::", i):
            tokens.append(Token(TokenKind.Separator, "::", i, i + 2))
            i += 2
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token(TokenKind.Operator, op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise LexError(f"unexpected character {ch!r}", i)
    return tokens


def _scan_number(text: str, i: int) -> int:
    n = len(text)
    start = i
    if text.startswith(("0x", "0X", "0b", "0B"), i):
        i += 2
        while i < n and (text[i].isalnum() or text[i] == "_"):
            i += 1
        return i
    seen_dot = False
    while i < n:
        c = text[i]
        if c.isdigit() or c == "_":
            i += 1
        elif c == "." and not seen_dot and i + 1 < n and (text[i + 1].isdigit() or i > start):
            seen_dot = True
            i += 1
        elif c in "eE" and i + 1 < n and (text[i + 1].isdigit() or text[i + 1] in "+-"):
            i += 2
        elif c in "fFdDlL":
            i += 1
            break
        else:
            break
    return i


def non_comment_count(tokens: list[Token]) -> int:
    return sum(1 for t in tokens if t.kind != TokenKind.Comment)


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


class AstTag(IntEnum):
    MethodDeclaration = 0
    FormalParameter = 1
    LocalVariableDeclaration = 2
    Assignment = 3
    MethodInvocation = 4
    FieldAccess = 5
    ArrayAccess = 6
    IfStatement = 7
    ForStatement = 8
    WhileStatement = 9
    DoStatement = 10
    SwitchStatement = 11
    TryStatement = 12
    ReturnStatement = 13
    ThrowStatement = 14
    BinaryExpression = 15
    UnaryExpression = 16
    CastExpression = 17
    Literal = 18
    TypeReference = 19


AST_CLASS_COUNT = 20


@dataclass
class Node:
    tag: AstTag
    start: int  # token index, inclusive
    end: int  # token index, inclusive
    children: list["Node"] = field(default_factory=list)


@dataclass
class SyntaxTree:
    tokens: list[Token]
    root: Node
    decision_points: list[int]  # token indices of decision points


class ParseError(CodeProbeError):
    def __init__(self, message: str, token_index: int):
        super().__init__(f"{message} at token {token_index}")
        self.token_index = token_index


_ASSIGN_OPS = frozenset("= += -= *= /= &= |= ^= %= <<= >>= >>>=".split())

# binary operator precedence, lowest first
_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
]

_LITERAL_KINDS = frozenset(
    {
        TokenKind.NumberLiteral,
        TokenKind.StringLiteral,
        TokenKind.CharLiteral,
        TokenKind.BoolLiteral,
        TokenKind.NullLiteral,
    }
)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.decisions: list[int] = []
        self._skip_comments()

    # -- token cursor -------------------------------------------------------

    def _skip_comments(self) -> None:
        while self.pos < len(self.toks) and self.toks[self.pos].kind == TokenKind.Comment:
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)

    def peek(self, ahead: int = 0) -> Token | None:
        i = self.pos
        seen = 0
        while i < len(self.toks):
            if self.toks[i].kind != TokenKind.Comment:
                if seen == ahead:
                    return self.toks[i]
                seen += 1
            i += 1
        return None

    def cur_text(self) -> str | None:
        t = self.peek()
        return None if t is None else t.text

    def advance(self) -> int:
        """Consume the current token; return its index."""
        if self.at_end():
            raise ParseError("unexpected end of tokens", len(self.toks))
        idx = self.pos
        self.pos += 1
        self._skip_comments()
        return idx

    def expect(self, text: str) -> int:
        t = self.peek()
        if t is None or t.text != text:
            raise ParseError(f"expected {text!r}", self.pos)
        return self.advance()

    def match(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.text == text:
            self.advance()
            return True
        return False

    def last_index(self) -> int:
        """Index of the last consumed non-comment token."""
        i = self.pos - 1
        while i >= 0 and self.toks[i].kind == TokenKind.Comment:
            i -= 1
        return i

    # -- method grammar -----------------------------------------------------

    def parse_method(self) -> Node:
        start = self.pos
        root = Node(AstTag.MethodDeclaration, start, start)
        # modifiers and marker annotations
        while True:
            t = self.peek()
            if t is None:
                raise ParseError("empty method", 0)
            if t.text in _MODIFIERS:
                self.advance()
            elif t.text == "@":
                self.advance()
                self.advance()  # annotation name
                if self.cur_text() == "(":
                    self._skip_balanced("(", ")")
            else:
                break
        if self.cur_text() == "<":  # type parameters
            self._skip_balanced("<", ">")
        # return type (absent for constructors) and name
        t0, t1 = self.peek(0), self.peek(1)
        if t0 is None:
            raise ParseError("missing method signature", self.pos)
        if t0.kind == TokenKind.Identifier and t1 is not None and t1.text == "(":
            self.advance()  # constructor name
        else:
            if t0.text == "void":
                self.advance()
            elif self._looks_like_type():
                self.parse_type(root)
            else:
                raise ParseError("expected return type", self.pos)
            t = self.peek()
            if t is None or t.kind != TokenKind.Identifier:
                raise ParseError("expected method name", self.pos)
            self.advance()
        self.expect("(")
        if self.cur_text() != ")":
            while True:
                self._parse_formal_parameter(root)
                if not self.match(","):
                    break
        self.expect(")")
        while self.match("["):  # archaic array-returning syntax
            self.expect("]")
        if self.match("throws"):
            while True:
                self._parse_qualified_name()
                if not self.match(","):
                    break
        self.expect("{")
        while self.cur_text() != "}":
            if self.at_end():
                raise ParseError("unterminated method body", self.pos)
            self.parse_statement(root)
        self.expect("}")
        root.end = self.last_index()
        return root

    def _parse_formal_parameter(self, parent: Node) -> None:
        node = Node(AstTag.FormalParameter, self.pos, self.pos)
        parent.children.append(node)
        while self.cur_text() == "final" or self.cur_text() == "@":
            if self.match("@"):
                self.advance()
                if self.cur_text() == "(":
                    self._skip_balanced("(", ")")
            else:
                self.advance()
        self.parse_type(node)
        self.match("...")
        t = self.peek()
        if t is None or t.kind not in (TokenKind.Identifier, TokenKind.Keyword):
            raise ParseError("expected parameter name", self.pos)
        self.advance()
        while self.match("["):
            self.expect("]")
        node.end = self.last_index()

    # -- types --------------------------------------------------------------

    def _looks_like_type(self, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        if t is None:
            return False
        return t.text in PRIMITIVE_TYPES or t.kind == TokenKind.Identifier

    def parse_type(self, parent: Node) -> Node:
        """Consume a type and wrap its tokens in a TypeReference node."""
        node = Node(AstTag.TypeReference, self.pos, self.pos)
        parent.children.append(node)
        t = self.peek()
        if t is None:
            raise ParseError("expected type", self.pos)
        if t.text in PRIMITIVE_TYPES:
            self.advance()
        elif t.kind == TokenKind.Identifier:
            self._parse_qualified_name()
        else:
            raise ParseError("expected type", self.pos)
        if self.cur_text() == "<":
            self._skip_balanced("<", ">")
        while self.cur_text() == "[" and (self.peek(1) is not None and self.peek(1).text == "]"):
            self.advance()
            self.advance()
        node.end = self.last_index()
        return node

    def _parse_qualified_name(self) -> None:
        self.advance()
        while self.cur_text() == "." and self.peek(1) is not None and (
            self.peek(1).kind == TokenKind.Identifier
        ):
            self.advance()
            self.advance()

    def _skip_balanced(self, open_t: str, close_t: str) -> None:
        depth = 0
        self.expect(open_t)
        depth = 1
        while depth > 0:
            t = self.peek()
            if t is None:
                raise ParseError(f"unbalanced {open_t}", self.pos)
            if t.text == open_t:
                depth += 1
            elif t.text == close_t:
                depth -= 1
            elif open_t == "<" and t.text in (">>", ">>>"):
                depth -= len(t.text)
            self.advance()

    # -- statements ---------------------------------------------------------

    def parse_statement(self, parent: Node) -> None:
        text = self.cur_text()
        if text is None:
            raise ParseError("unexpected end of statement", self.pos)
        if text == "{":
            self.advance()
            while self.cur_text() != "}":
                self.parse_statement(parent)
            self.expect("}")
            return
        if text == ";":
            self.advance()
            return
        if text == "if":
            self._parse_if(parent)
            return
        if text == "for":
            self._parse_for(parent)
            return
        if text == "while":
            node = self._open(parent, AstTag.WhileStatement)
            self.decisions.append(self.advance())
            self.expect("(")
            self.parse_expression(node)
            self.expect(")")
            self.parse_statement(node)
            node.end = self.last_index()
            return
        if text == "do":
            node = self._open(parent, AstTag.DoStatement)
            self.decisions.append(self.advance())
            self.parse_statement(node)
            self.expect("while")
            self.expect("(")
            self.parse_expression(node)
            self.expect(")")
            self.expect(";")
            node.end = self.last_index()
            return
        if text == "switch":
            self._parse_switch(parent)
            return
        if text == "try":
            self._parse_try(parent)
            return
        if text == "return":
            node = self._open(parent, AstTag.ReturnStatement)
            self.advance()
            if self.cur_text() != ";":
                self.parse_expression(node)
            self.expect(";")
            node.end = self.last_index()
            return
        if text == "throw":
            node = self._open(parent, AstTag.ThrowStatement)
            self.advance()
            self.parse_expression(node)
            self.expect(";")
            node.end = self.last_index()
            return
        if text in ("break", "continue"):
            self.advance()
            t = self.peek()
            if t is not None and t.kind == TokenKind.Identifier:
                self.advance()  # label
            self.expect(";")
            return
        if text == "synchronized":
            self.advance()
            self.expect("(")
            self.parse_expression(parent)
            self.expect(")")
            self.parse_statement(parent)
            return
        if text == "assert":
            self.advance()
            self.parse_expression(parent)
            if self.match(":"):
                self.parse_expression(parent)
            self.expect(";")
            return
        # labeled statement
        t0, t1 = self.peek(0), self.peek(1)
        if (
            t0 is not None
            and t0.kind == TokenKind.Identifier
            and t1 is not None
            and t1.text == ":"
        ):
            self.advance()
            self.advance()
            self.parse_statement(parent)
            return
        if self._looks_like_local_decl():
            self._parse_local_decl(parent)
            self.expect(";")
            return
        self.parse_expression(parent)
        self.expect(";")

    def _open(self, parent: Node, tag: AstTag) -> Node:
        node = Node(tag, self.pos, self.pos)
        parent.children.append(node)
        return node

    def _parse_if(self, parent: Node) -> None:
        node = self._open(parent, AstTag.IfStatement)
        self.decisions.append(self.advance())  # 'if'
        self.expect("(")
        self.parse_expression(node)
        self.expect(")")
        self.parse_statement(node)
        if self.match("else"):
            self.parse_statement(node)
        node.end = self.last_index()

    def _parse_for(self, parent: Node) -> None:
        node = self._open(parent, AstTag.ForStatement)
        self.decisions.append(self.advance())  # 'for'
        self.expect("(")
        if self.cur_text() != ";":
            if self._looks_like_local_decl():
                decl = self._parse_local_decl(node, allow_colon=True)
                if self.match(":"):  # enhanced for
                    self.parse_expression(node)
                    self.expect(")")
                    self.parse_statement(node)
                    node.end = self.last_index()
                    return
            else:
                self._parse_expression_list(node)
        self.expect(";")
        if self.cur_text() != ";":
            self.parse_expression(node)
        self.expect(";")
        if self.cur_text() != ")":
            self._parse_expression_list(node)
        self.expect(")")
        self.parse_statement(node)
        node.end = self.last_index()

    def _parse_expression_list(self, parent: Node) -> None:
        self.parse_expression(parent)
        while self.match(","):
            self.parse_expression(parent)

    def _parse_switch(self, parent: Node) -> None:
        node = self._open(parent, AstTag.SwitchStatement)
        self.advance()  # 'switch'
        self.expect("(")
        self.parse_expression(node)
        self.expect(")")
        self.expect("{")
        while self.cur_text() != "}":
            if self.cur_text() == "case":
                self.decisions.append(self.advance())
                self.parse_expression(node)
                while self.match(","):
                    self.parse_expression(node)
                if not self.match(":"):
                    self.expect("->")
            elif self.cur_text() == "default":
                self.advance()
                if not self.match(":"):
                    self.expect("->")
            else:
                self.parse_statement(node)
        self.expect("}")
        node.end = self.last_index()

    def _parse_try(self, parent: Node) -> None:
        node = self._open(parent, AstTag.TryStatement)
        self.advance()  # 'try'
        if self.cur_text() == "(":  # try-with-resources
            self.advance()
            while self.cur_text() != ")":
                if self._looks_like_local_decl():
                    self._parse_local_decl(node)
                else:
                    self.parse_expression(node)
                if not self.match(";"):
                    break
            self.expect(")")
        self.expect("{")
        while self.cur_text() != "}":
            self.parse_statement(node)
        self.expect("}")
        while self.cur_text() == "catch":
            self.decisions.append(self.advance())
            self.expect("(")
            while self.cur_text() == "final":
                self.advance()
            self.parse_type(node)
            while self.match("|"):  # multi-catch
                self.parse_type(node)
            self.advance()  # exception variable
            self.expect(")")
            self.expect("{")
            while self.cur_text() != "}":
                self.parse_statement(node)
            self.expect("}")
        if self.match("finally"):
            self.expect("{")
            while self.cur_text() != "}":
                self.parse_statement(node)
            self.expect("}")
        node.end = self.last_index()

    # -- local variable declarations ----------------------------------------

    def _looks_like_local_decl(self) -> bool:
        """Lookahead: [final] Type Name followed by '=', ';', ',', ':' or '['."""
        i = 0
        if self.peek(i) is not None and self.peek(i).text == "final":
            i += 1
        t = self.peek(i)
        if t is None:
            return False
        if t.text in PRIMITIVE_TYPES:
            i += 1
        elif t.kind == TokenKind.Identifier:
            i += 1
            while True:
                a, b = self.peek(i), self.peek(i + 1)
                if a is not None and a.text == "." and b is not None and b.kind == TokenKind.Identifier:
                    i += 2
                else:
                    break
            # generics: scan past a balanced <...>
            if self.peek(i) is not None and self.peek(i).text == "<":
                depth = 0
                while True:
                    a = self.peek(i)
                    if a is None:
                        return False
                    if a.text == "<":
                        depth += 1
                    elif a.text == ">":
                        depth -= 1
                    elif a.text in (">>", ">>>"):
                        depth -= len(a.text)
                    elif a.text in (";", "(", ")", "{", "}") or a.kind in _LITERAL_KINDS:
                        return False
                    i += 1
                    if depth <= 0:
                        break
        else:
            return False
        while True:
            a, b = self.peek(i), self.peek(i + 1)
            if a is not None and a.text == "[" and b is not None and b.text == "]":
                i += 2
            else:
                break
        name = self.peek(i)
        if name is None or name.kind != TokenKind.Identifier:
            return False
        after = self.peek(i + 1)
        if after is None:
            return False
        if after.text == "[" and self.peek(i + 2) is not None and self.peek(i + 2).text == "]":
            return True
        return after.text in ("=", ";", ",", ":")

    def _parse_local_decl(self, parent: Node, allow_colon: bool = False) -> Node:
        node = self._open(parent, AstTag.LocalVariableDeclaration)
        while self.cur_text() == "final":
            self.advance()
        self.parse_type(node)
        while True:
            t = self.peek()
            if t is None or t.kind != TokenKind.Identifier:
                raise ParseError("expected variable name", self.pos)
            self.advance()
            while self.cur_text() == "[" and self.peek(1) is not None and self.peek(1).text == "]":
                self.advance()
                self.advance()
            if allow_colon and self.cur_text() == ":":
                break  # enhanced-for header; caller consumes ':'
            if self.match("="):
                self.parse_expression(node)
            if not self.match(","):
                break
        node.end = self.last_index()
        return node

    # -- expressions ---------------------------------------------------------
    #
    # Expression parsers return the list of top-level nodes created for the
    # parsed span, so callers can re-parent them under a wrapping node
    # (Assignment, BinaryExpression, ...). `parent` receives the final nodes.

    def parse_expression(self, parent: Node) -> None:
        start = self.pos
        nodes = self._parse_assignment()
        parent.children.extend(nodes)
        if self.pos == start:
            raise ParseError("expected expression", self.pos)

    def _parse_assignment(self) -> list[Node]:
        start = self.pos
        lhs = self._parse_ternary()
        t = self.peek()
        if t is not None and t.text in _ASSIGN_OPS and t.kind == TokenKind.Operator:
            self.advance()
            rhs = self._parse_assignment()
            node = Node(AstTag.Assignment, start, self.last_index(), lhs + rhs)
            return [node]
        return lhs

    def _parse_ternary(self) -> list[Node]:
        nodes = self._parse_binary(0)
        t = self.peek()
        if t is not None and t.text == "?" and t.kind == TokenKind.Operator:
            self.decisions.append(self.advance())
            then_nodes = self._parse_assignment()
            self.expect(":")
            else_nodes = self._parse_ternary()
            # the conditional expression has no tag of its own; children float
            nodes = nodes + then_nodes + else_nodes
        return nodes

    def _parse_binary(self, level: int) -> list[Node]:
        if level >= len(_BINARY_LEVELS):
            return self._parse_unary()
        ops = _BINARY_LEVELS[level]
        start = self.pos
        nodes = self._parse_binary(level + 1)
        while True:
            t = self.peek()
            if t is None or t.text not in ops:
                break
            if t.text in ("&&", "||"):
                self.decisions.append(self.advance())
            else:
                self.advance()
            if t.text == "instanceof":
                holder = Node(AstTag.BinaryExpression, start, start, list(nodes))
                self.parse_type(holder)
                holder.end = self.last_index()
                nodes = [holder]
                continue
            rhs = self._parse_binary(level + 1)
            node = Node(AstTag.BinaryExpression, start, self.last_index(), nodes + rhs)
            nodes = [node]
        return nodes

    def _parse_unary(self) -> list[Node]:
        start = self.pos
        t = self.peek()
        if t is None:
            raise ParseError("expected expression", self.pos)
        if t.kind == TokenKind.Operator and t.text in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            inner = self._parse_unary()
            return [Node(AstTag.UnaryExpression, start, self.last_index(), inner)]
        if t.text == "(" and self._looks_like_cast():
            self.advance()
            node = Node(AstTag.CastExpression, start, start)
            self.parse_type(node)
            self.expect(")")
            inner = self._parse_unary()
            node.children.extend(inner)
            node.end = self.last_index()
            return [node]
        return self._parse_postfix()

    def _looks_like_cast(self) -> bool:
        """At '(': true when the parenthesized run is a bare type and the
        next token can start an operand."""
        i = 1
        t = self.peek(i)
        if t is None:
            return False
        if t.text in PRIMITIVE_TYPES:
            i += 1
        elif t.kind == TokenKind.Identifier:
            i += 1
            while True:
                a, b = self.peek(i), self.peek(i + 1)
                if a is not None and a.text == "." and b is not None and b.kind == TokenKind.Identifier:
                    i += 2
                else:
                    break
            if self.peek(i) is not None and self.peek(i).text == "<":
                depth = 0
                while True:
                    a = self.peek(i)
                    if a is None:
                        return False
                    if a.text == "<":
                        depth += 1
                    elif a.text == ">":
                        depth -= 1
                    elif a.text in (">>", ">>>"):
                        depth -= len(a.text)
                    elif a.text in (";", "(", ")"):
                        return False
                    i += 1
                    if depth <= 0:
                        break
        else:
            return False
        while True:
            a, b = self.peek(i), self.peek(i + 1)
            if a is not None and a.text == "[" and b is not None and b.text == "]":
                i += 2
            else:
                break
        if self.peek(i) is None or self.peek(i).text != ")":
            return False
        after = self.peek(i + 1)
        if after is None:
            return False
        return (
            after.kind
            in (
                TokenKind.Identifier,
                TokenKind.NumberLiteral,
                TokenKind.StringLiteral,
                TokenKind.CharLiteral,
                TokenKind.BoolLiteral,
                TokenKind.NullLiteral,
            )
            or after.text in ("(", "!", "~", "this", "super", "new")
            or after.text in PRIMITIVE_TYPES
        )

    def _parse_postfix(self) -> list[Node]:
        start = self.pos
        nodes = self._parse_primary()
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text == "." :
                nxt = self.peek(1)
                after = self.peek(2)
                if nxt is None:
                    break
                if nxt.text == "new":  # qualified creation, permissive
                    self.advance()
                    self.advance()
                    self._parse_creation_rest(Node(AstTag.MethodDeclaration, self.pos, self.pos))
                    continue
                self.advance()  # '.'
                name_idx = self.advance()  # member name ('class', ident, ...)
                if after is not None and after.text == "(":
                    args: list[Node] = []
                    self._parse_arguments(args)
                    node = Node(AstTag.MethodInvocation, start, self.last_index(), nodes + args)
                else:
                    node = Node(AstTag.FieldAccess, start, self.last_index(), nodes)
                nodes = [node]
                continue
            if t.text == "[":
                self.advance()
                idx_nodes = self._parse_assignment()
                self.expect("]")
                node = Node(AstTag.ArrayAccess, start, self.last_index(), nodes + idx_nodes)
                nodes = [node]
                continue
            if t.kind == TokenKind.Operator and t.text in ("++", "--"):
                self.advance()
                node = Node(AstTag.UnaryExpression, start, self.last_index(), nodes)
                nodes = [node]
                continue
            if t.text == "::":  # method reference, permissive
                self.advance()
                self.advance()
                continue
            break
        return nodes

    def _parse_primary(self) -> list[Node]:
        t = self.peek()
        if t is None:
            raise ParseError("expected expression", self.pos)
        start = self.pos
        if t.kind in _LITERAL_KINDS:
            self.advance()
            return [Node(AstTag.Literal, start, start)]
        if t.text == "(":
            self.advance()
            nodes = self._parse_assignment()
            self.expect(")")
            return nodes
        if t.text == "new":
            self.advance()
            holder = Node(AstTag.MethodDeclaration, self.pos, self.pos)  # scratch
            self._parse_creation_rest(holder)
            return holder.children
        if t.text in ("this", "super"):
            self.advance()
            if self.cur_text() == "(":
                args: list[Node] = []
                self._parse_arguments(args)
                return [Node(AstTag.MethodInvocation, start, self.last_index(), args)]
            return []
        if t.text in PRIMITIVE_TYPES or t.text == "void":
            # e.g. int.class in reflection-ish code; permissive
            self.advance()
            return []
        if t.kind == TokenKind.Identifier:
            self.advance()
            if self.cur_text() == "(":
                args = []
                self._parse_arguments(args)
                return [Node(AstTag.MethodInvocation, start, self.last_index(), args)]
            return []
        raise ParseError(f"unexpected token {t.text!r} in expression", self.pos)

    def _parse_creation_rest(self, holder: Node) -> None:
        """After 'new': Type then (args) or array dims or array initializer."""
        self.parse_type(holder)
        if self.cur_text() == "(":
            self._parse_arguments(holder.children)
            if self.cur_text() == "{":  # anonymous class body, permissive
                self._skip_balanced("{", "}")
            return
        while self.cur_text() == "[":
            self.advance()
            if self.cur_text() != "]":
                holder.children.extend(self._parse_assignment())
            self.expect("]")
        if self.cur_text() == "{":
            self._parse_array_initializer(holder)

    def _parse_array_initializer(self, holder: Node) -> None:
        self.expect("{")
        while self.cur_text() != "}":
            if self.cur_text() == "{":
                self._parse_array_initializer(holder)
            else:
                holder.children.extend(self._parse_assignment())
            if not self.match(","):
                break
        self.expect("}")

    def _parse_arguments(self, out: list[Node]) -> None:
        self.expect("(")
        if self.cur_text() != ")":
            out.extend(self._parse_assignment())
            while self.match(","):
                out.extend(self._parse_assignment())
        self.expect(")")


def parse_method(tokens: list[Token]) -> SyntaxTree:
    """Parse one method snippet's tokens into a 20-tag syntax tree."""
    parser = _Parser(tokens)
    root = parser.parse_method()
    t = parser.peek()
    if t is not None:
        raise ParseError(f"trailing tokens after method body ({t.text!r})", parser.pos)
    return SyntaxTree(tokens=tokens, root=root, decision_points=sorted(parser.decisions))


# ---------------------------------------------------------------------------
# Derived analyses
# ---------------------------------------------------------------------------


def ast_tag_tokens(tree: SyntaxTree) -> list[tuple[int, AstTag]]:
    """Tag every non-comment, non-separator token with the tag of its
    innermost enclosing tree node."""
    tags: dict[int, AstTag] = {}

    def visit(node: Node) -> None:
        for i in range(node.start, node.end + 1):
            tags[i] = node.tag
        for child in node.children:
            visit(child)

    visit(tree.root)
    out: list[tuple[int, AstTag]] = []
    for i, tok in enumerate(tree.tokens):
        if tok.kind in (TokenKind.Comment, TokenKind.Separator):
            continue
        if i in tags:
            out.append((i, tags[i]))
    return out


def cyclomatic(tree: SyntaxTree) -> int:
    """Decision-point count: if / for / while / do / case / catch / ternary
    and each && or ||. Straight-line code scores 0."""
    return len(tree.decision_points)


@dataclass(frozen=True)
class PerturbationRecord:
    original: str
    mutated: str
    char_index: int
    snippet_offset: int


def perturb_primitive_type(text: str, seed: int) -> tuple[str, PerturbationRecord] | None:
    """Swap one adjacent character pair inside one primitive-type keyword,
    chosen uniformly at random under `seed`. Returns None when the snippet
    contains no primitive type token."""
    tokens = lex(text)
    prims = [t for t in tokens if t.kind == TokenKind.Keyword and t.text in PRIMITIVE_TYPES]
    if not prims:
        return None
    rng = random.Random(mix64(seed, len(text)))
    order = list(range(len(prims)))
    rng.shuffle(order)
    for occ in order:
        tok = prims[occ]
        word = tok.text
        candidates = list(range(len(word) - 1))
        rng.shuffle(candidates)
        for idx in candidates:
            mutated = word[:idx] + word[idx + 1] + word[idx] + word[idx + 2 :]
            if mutated == word or mutated in JAVA_KEYWORDS:
                continue
            new_text = text[: tok.start] + mutated + text[tok.end :]
            record = PerturbationRecord(
                original=word, mutated=mutated, char_index=idx, snippet_offset=tok.start
            )
            return new_text, record
    return None
