"""Expression language for the CLI and the HTTP service.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | factor
    factor := call | NAME | number | list | '(' expr ')'
    call   := NAME '(' [arg (',' arg)*] ')'
    list   := '[' [arg (',' arg)*] ']'

Numbers are decimal literals with an optional exponent; a trailing ``i``
makes an imaginary literal, so ``1.5+0.3i`` is a complex number.  The node
classes compare structurally and ignore source offsets, which is what the
printer round trip relies on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

__all__ = ["Node", "Number", "Imag", "Name", "ListNode", "Call", "Unary", "BinOp",
           "parse", "to_text", "tokenize"]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[-+*/(),\[\]])
""", re.VERBOSE)


@dataclass(frozen=True)
class Node:
    pos: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Number(Node):
    text: str


@dataclass(frozen=True)
class Imag(Node):
    text: str  # without the trailing "i"


@dataclass(frozen=True)
class Name(Node):
    id: str


@dataclass(frozen=True)
class ListNode(Node):
    items: tuple


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected) -> None:
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {found}", self.text, tok.pos, expected)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "punct" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str, also=()) -> None:
        if not self.accept(text):
            self.fail((text, *also))

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(("+", "-", "*", "/", "end of input"))
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "punct" and self.tok.text in "+-":
            tok = self.tok
            self.i += 1
            node = BinOp(tok.text, node, self.term(), pos=tok.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "punct" and self.tok.text in "*/":
            tok = self.tok
            self.i += 1
            node = BinOp(tok.text, node, self.unary(), pos=tok.pos)
        return node

    def unary(self) -> Node:
        tok = self.tok
        if tok.kind == "punct" and tok.text in "+-":
            self.i += 1
            return Unary(tok.text, self.unary(), pos=tok.pos)
        return self.factor()

    def factor(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            if tok.text.endswith("i"):
                return Imag(tok.text[:-1], pos=tok.pos)
            return Number(tok.text, pos=tok.pos)
        if tok.kind == "name":
            self.i += 1
            if self.accept("("):
                return Call(tok.text, self.args(")"), pos=tok.pos)
            return Name(tok.text, pos=tok.pos)
        if self.accept("["):
            return ListNode(self.args("]"), pos=tok.pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")", ("+", "-", "*", "/"))
            return node
        self.fail(("number", "name", "(", "["))

    def args(self, close: str) -> tuple:
        items = []
        if self.accept(close):
            return ()
        while True:
            items.append(self.expr())
            if self.accept(close):
                return tuple(items)
            if not self.accept(","):
                self.fail((",", close, "+", "-", "*", "/"))


def parse(text: str) -> Node:
    """Parse ``text`` into an AST; raises ParseError with position and expected tokens."""
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Node) -> str:
    """Canonical text for an AST; ``parse(to_text(t)) == t`` for every parsed tree."""
    if isinstance(node, Number):
        return node.text
    if isinstance(node, Imag):
        return node.text + "i"
    if isinstance(node, Name):
        return node.id
    if isinstance(node, ListNode):
        return "[" + ",".join(to_text(x) for x in node.items) + "]"
    if isinstance(node, Call):
        return node.name + "(" + ",".join(to_text(x) for x in node.args) + ")"
    if isinstance(node, Unary):
        inner = to_text(node.operand)
        if isinstance(node.operand, BinOp):
            inner = f"({inner})"
        return node.op + inner
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left, right = to_text(node.left), to_text(node.right)
        if isinstance(node.left, BinOp) and _PREC[node.left.op] < prec:
            left = f"({left})"
        # the right operand needs parentheses at equal precedence (left associativity)
        if isinstance(node.right, BinOp) and _PREC[node.right.op] <= prec:
            right = f"({right})"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an AST node: {node!r}")
