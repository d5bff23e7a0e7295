"""Regular expressions: parser, AST and conversion to an epsilon-free Nfa.

Grammar::

    expr   := term ('|' term)*
    term   := factor+
    factor := base '*'*
    base   := letter | '(' expr ')' | '_'

``_`` is the empty word. Whitespace is ignored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .automata import Alphabet, Nfa
from .errors import RegexSyntaxError, UnknownLetter

EPSILON = "_"
_SPECIAL = set("|()*_")


@dataclass(frozen=True)
class Letter:
    char: str


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Alt:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Concat:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Star:
    inner: "RegexAst"


RegexAst = Union[Letter, Epsilon, Alt, Concat, Star]


@dataclass(frozen=True)
class Regex:
    """A parsed expression together with its declared alphabet."""

    ast: RegexAst
    alphabet: Alphabet


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        # (byte offset, char) for every non-whitespace character
        self.tokens = []
        pos = 0
        for ch in text:
            if not ch.isspace():
                self.tokens.append((pos, ch))
            pos += len(ch.encode("utf-8"))
        self.end = pos
        self.i = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else None

    def offset(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else self.end

    def parse(self) -> RegexAst:
        if not self.tokens:
            raise RegexSyntaxError("empty expression", 0)
        node = self.expr()
        if self.i < len(self.tokens):
            raise RegexSyntaxError(f"unexpected {self.peek()!r}", self.offset())
        return node

    def expr(self) -> RegexAst:
        node = self.term()
        while self.peek() == "|":
            self.i += 1
            node = Alt(node, self.term())
        return node

    def term(self) -> RegexAst:
        node = self.factor()
        while self.peek() is not None and self.peek() not in "|)":
            node = Concat(node, self.factor())
        return node

    def factor(self) -> RegexAst:
        node = self.base()
        while self.peek() == "*":
            self.i += 1
            node = Star(node)
        return node

    def base(self) -> RegexAst:
        ch, off = self.peek(), self.offset()
        if ch is None:
            raise RegexSyntaxError("unexpected end of expression", off)
        if ch == "(":
            self.i += 1
            node = self.expr()
            if self.peek() != ")":
                raise RegexSyntaxError("expected ')'", self.offset())
            self.i += 1
            return node
        if ch == EPSILON:
            self.i += 1
            return Epsilon()
        if ch in _SPECIAL:
            raise RegexSyntaxError(f"unexpected {ch!r}", off)
        if ch not in self.alphabet:
            raise UnknownLetter(ch, self.alphabet.letters, off)
        self.i += 1
        return Letter(ch)


def parse_regex(text: str, alphabet) -> Regex:
    alphabet = Alphabet.of(alphabet)
    return Regex(_Parser(text, alphabet).parse(), alphabet)


def node_count(ast: RegexAst) -> int:
    if isinstance(ast, (Letter, Epsilon)):
        return 1
    if isinstance(ast, Star):
        return 1 + node_count(ast.inner)
    return 1 + node_count(ast.left) + node_count(ast.right)


def unparse(ast: RegexAst) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(ast, Letter):
        return ast.char
    if isinstance(ast, Epsilon):
        return EPSILON
    if isinstance(ast, Star):
        return f"({unparse(ast.inner)})*"
    op = "|" if isinstance(ast, Alt) else ""
    return f"({unparse(ast.left)}{op}{unparse(ast.right)})"


def ast_to_nfa(regex: Regex) -> Nfa:
    """Thompson construction, then epsilon elimination and trimming."""
    eps: dict[int, set[int]] = {}
    moves: list[tuple[int, str, int]] = []
    count = 0

    def new():
        nonlocal count
        count += 1
        return count - 1

    def build(node):
        if isinstance(node, Epsilon):
            s = new()
            return s, s
        if isinstance(node, Letter):
            s, t = new(), new()
            moves.append((s, node.char, t))
            return s, t
        if isinstance(node, Concat):
            s1, t1 = build(node.left)
            s2, t2 = build(node.right)
            eps.setdefault(t1, set()).add(s2)
            return s1, t2
        if isinstance(node, Alt):
            s, t = new(), new()
            for child in (node.left, node.right):
                cs, ct = build(child)
                eps.setdefault(s, set()).add(cs)
                eps.setdefault(ct, set()).add(t)
            return s, t
        s, t = new(), new()
        cs, ct = build(node.inner)
        eps.setdefault(s, set()).update((cs, t))
        eps.setdefault(ct, set()).update((cs, t))
        return s, t

    start, final = build(regex.ast)

    def closure(q):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in eps.get(p, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    by_source: dict[int, list[tuple[str, int]]] = {}
    for p, c, r in moves:
        by_source.setdefault(p, []).append((c, r))
    closures = [closure(q) for q in range(count)]
    trans = set()
    accepting = set()
    for q in range(count):
        for p in closures[q]:
            for c, r in by_source.get(p, ()):
                trans.add((q, c, r))
        if final in closures[q]:
            accepting.add(q)

    out_edges: dict[int, list[tuple[str, int]]] = {}
    for p, c, r in sorted(trans):
        out_edges.setdefault(p, []).append((c, r))
    # keep states reachable from start
    ids = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        for c, r in out_edges.get(order[i], ()):
            if r not in ids:
                ids[r] = len(order)
                order.append(r)
        i += 1
    return Nfa(
        regex.alphabet,
        len(order),
        {0},
        {ids[q] for q in order if q in accepting},
        {(ids[p], c, ids[r]) for p, c, r in trans if p in ids},
    )


def regex_to_nfa(text: str, alphabet) -> Nfa:
    return ast_to_nfa(parse_regex(text, alphabet))
