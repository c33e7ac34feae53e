"""Expression grammar shared by scalars, algebra elements and tensors.

Numbers, names, ``+ - * / ^ ( )``, juxtaposition as product, and ``⊗`` or
``@`` as the tensor sign.  A name written directly before ``*`` is read as the
starred name when that starred name is known to the evaluation context.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, NAME, OP, END
    text: str
    line: int
    col: int


_OPS = {"+", "-", "*", "/", "^", "(", ")", "⊗", "@", "·", ","}
_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉₊₋"


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_" or ch == "'" or ch in _SUBSCRIPTS


def _segment(ident: str, known: Callable[[str], bool]) -> list[str]:
    """Split a run of letters into known names (longest match first), else keep it whole."""
    n = len(ident)
    best: list = [None] * (n + 1)
    best[n] = []
    for i in range(n - 1, -1, -1):
        for j in range(n, i, -1):
            piece = ident[i:j]
            if best[j] is not None and known(piece):
                best[i] = [piece] + best[j]
                break
    return best[0] if best[0] is not None else [ident]


def tokenize(text: str, known: Callable[[str], bool] = lambda s: False,
             line: int = 1, col: int = 1) -> list[Token]:
    out: list[Token] = []
    i, n = 0, len(text)
    ln = line
    line_start = -(col - 1)
    while i < n:
        ch = text[i]
        cpos = i - line_start + 1
        if ch == "\n":
            ln += 1
            line_start = i + 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("NUM", text[i:j], ln, cpos))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and _is_name_char(text[j]):
                j += 1
            ident = text[i:j]
            pieces = [ident] if known(ident) or known(ident + "*") else _segment(ident, known)
            for k, piece in enumerate(pieces):
                name = piece
                if k == len(pieces) - 1 and j < n and text[j] == "*" and known(name + "*"):
                    name += "*"
                    j += 1
                out.append(Token("NAME", name, ln, cpos))
                cpos += len(piece)
            i = j
            continue
        if ch in _OPS:
            out.append(Token("OP", ch, ln, cpos))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", ln, cpos)
    end_col = n - line_start + 1
    out.append(Token("END", "", ln, end_col))
    return out


# --- syntax tree -----------------------------------------------------------

@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple
    tok: Token


class _Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.toks = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def take(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.cur
        if t.kind != "OP" or t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.take()

    def parse(self) -> Node:
        node = self.sum()
        if self.cur.kind != "END":
            t = self.cur
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col)
        return node

    def sum(self) -> Node:
        node = self.tensor()
        while self.cur.kind == "OP" and self.cur.text in ("+", "-"):
            t = self.take()
            rhs = self.tensor()
            node = Node("add" if t.text == "+" else "sub", (node, rhs), t)
        return node

    def tensor(self) -> Node:
        first = self.product()
        legs = [first]
        while self.cur.kind == "OP" and self.cur.text in ("⊗", "@"):
            self.take()
            legs.append(self.product())
        if len(legs) == 1:
            return first
        return Node("tensor", tuple(legs), first.tok)

    def _starts_atom(self) -> bool:
        t = self.cur
        return t.kind in ("NUM", "NAME") or (t.kind == "OP" and t.text == "(")

    def product(self) -> Node:
        node = self.unary()
        while True:
            t = self.cur
            if t.kind == "OP" and t.text in ("*", "·"):
                self.take()
                node = Node("mul", (node, self.unary()), t)
            elif t.kind == "OP" and t.text == "/":
                self.take()
                node = Node("div", (node, self.unary()), t)
            elif self._starts_atom():
                node = Node("mul", (node, self.power()), t)
            else:
                return node

    def unary(self) -> Node:
        t = self.cur
        if t.kind == "OP" and t.text in ("-", "+"):
            self.take()
            inner = self.unary()
            return Node("neg", (inner,), t) if t.text == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.cur.kind == "OP" and self.cur.text == "^":
            t = self.take()
            sign = 1
            if self.cur.kind == "OP" and self.cur.text in ("-", "+"):
                sign = -1 if self.take().text == "-" else 1
            if self.cur.kind == "OP" and self.cur.text == "(":
                self.take()
                if self.cur.kind == "OP" and self.cur.text == "-":
                    self.take()
                    sign = -sign
                num = self.cur
                if num.kind != "NUM":
                    raise ParseError("exponent must be an integer", num.line, num.col)
                self.take()
                self.expect(")")
            else:
                num = self.cur
                if num.kind != "NUM":
                    raise ParseError("exponent must be an integer", num.line, num.col)
                self.take()
            return Node("pow", (base, sign * int(num.text)), t)
        return base

    def atom(self) -> Node:
        t = self.cur
        if t.kind == "NUM":
            self.take()
            return Node("num", (int(t.text),), t)
        if t.kind == "NAME":
            self.take()
            return Node("name", (t.text,), t)
        if t.kind == "OP" and t.text == "(":
            self.take()
            inner = self.sum()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.col)


def parse_tree(text: str, known: Callable[[str], bool] = lambda s: False,
               line: int = 1, col: int = 1) -> Node:
    return _Parser(tokenize(text, known, line, col)).parse()


class EvalContext:
    """Evaluation hooks; subclasses decide what names and tensors mean."""

    def known(self, name: str) -> bool:
        return False

    def number(self, value: int) -> Any:
        raise NotImplementedError

    def name(self, name: str, tok: Token) -> Any:
        raise ParseError(f"unknown symbol {name!r}", tok.line, tok.col)

    def tensor(self, legs: list, tok: Token) -> Any:
        raise ParseError("tensor products are not allowed here", tok.line, tok.col)

    def divide(self, a: Any, b: Any, tok: Token) -> Any:
        try:
            return a / b
        except (TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid division: {exc}", tok.line, tok.col) from None

    def power(self, a: Any, k: int, tok: Token) -> Any:
        try:
            return a ** k
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"invalid power: {exc}", tok.line, tok.col) from None

    def multiply(self, a: Any, b: Any, tok: Token) -> Any:
        try:
            return a * b
        except TypeError as exc:
            raise ParseError(f"invalid product: {exc}", tok.line, tok.col) from None

    def add(self, a: Any, b: Any, tok: Token) -> Any:
        try:
            return a + b
        except TypeError as exc:
            raise ParseError(f"invalid sum: {exc}", tok.line, tok.col) from None


def evaluate(node: Node, ctx: EvalContext) -> Any:
    k = node.kind
    if k == "num":
        return ctx.number(node.args[0])
    if k == "name":
        return ctx.name(node.args[0], node.tok)
    if k == "add":
        return ctx.add(evaluate(node.args[0], ctx), evaluate(node.args[1], ctx), node.tok)
    if k == "sub":
        return ctx.add(evaluate(node.args[0], ctx), -evaluate(node.args[1], ctx), node.tok)
    if k == "neg":
        return -evaluate(node.args[0], ctx)
    if k == "mul":
        return ctx.multiply(evaluate(node.args[0], ctx), evaluate(node.args[1], ctx), node.tok)
    if k == "div":
        return ctx.divide(evaluate(node.args[0], ctx), evaluate(node.args[1], ctx), node.tok)
    if k == "pow":
        return ctx.power(evaluate(node.args[0], ctx), node.args[1], node.tok)
    if k == "tensor":
        return ctx.tensor([evaluate(a, ctx) for a in node.args], node.tok)
    raise AssertionError(k)


def parse_with(text: str, ctx: EvalContext, line: int = 1, col: int = 1) -> Any:
    return evaluate(parse_tree(text, ctx.known, line, col), ctx)
