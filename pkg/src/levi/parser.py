"""Expression grammar for field constants, piecewise functions, and sets.

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | atom ['^' exponent]
    exponent := integer | '(' expr ')'
    atom     := integer | 'd' | 'x' | name | '(' expr ')'
              | ('abs' | 'min' | 'max') '(' expr {',' expr} ')'
              | 'O' '(' expr ')'
    interval := ('[' | '(') expr ',' expr (']' | ')')
    piecewise:= 'piecewise' '{' interval ':' expr {';' interval ':' expr} '}'
    set      := 'set' '{' [interval {('|' | 'u') interval}] '}'
    stream   := 'stream' '(' name '->' interval ',' expr ')'
    input    := expr | piecewise | set | stream

Whitespace-insensitive; every token carries a source position so syntax
errors point at the offending column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Union

from .errors import ExprSyntaxError

_SYMBOLS = ("->", "+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}",
            ",", ";", ":", "|")
_UNION_WORDS = {"u", "∪"}
_KEYWORDS = {"piecewise", "set", "stream", "abs", "min", "max", "O", "d", "x"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'name', or the symbol itself
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "∪":
            tokens.append(Token("|", "|", line, col))
            i += 1
            col += 1
            continue
        two = source[i:i + 2]
        if two == "->":
            tokens.append(Token("->", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "+-*/^()[]{},;:|":
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(source) and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(source) and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "|" if word in _UNION_WORDS else "name"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("end", "", line, col))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Q


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class BigO:
    operand: "Expr"


@dataclass(frozen=True)
class IntervalNode:
    lo: "Expr"
    hi: "Expr"
    closed_left: bool
    closed_right: bool


@dataclass(frozen=True)
class PiecewiseNode:
    pieces: tuple[tuple[IntervalNode, "Expr"], ...]


@dataclass(frozen=True)
class SetNode:
    intervals: tuple[IntervalNode, ...]


@dataclass(frozen=True)
class StreamNode:
    var: str
    interval: IntervalNode
    bound: "Expr"


Expr = Union[Num, Name, BinOp, Neg, Pow, Call, BigO]
TopLevel = Union[Expr, PiecewiseNode, SetNode, StreamNode]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def here(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.here
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.here
        if tok.kind != kind:
            raise ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}",
                                  tok.line, tok.col, (kind,))
        return self.advance()

    def fail(self, *expected: str) -> ExprSyntaxError:
        tok = self.here
        return ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}",
                               tok.line, tok.col, expected)

    # -- grammar --------------------------------------------------------

    def parse_top(self) -> TopLevel:
        tok = self.here
        if tok.kind == "name" and tok.text == "piecewise":
            node = self.parse_piecewise()
        elif tok.kind == "name" and tok.text == "set":
            node = self.parse_set()
        elif tok.kind == "name" and tok.text == "stream":
            node = self.parse_stream()
        else:
            node = self.parse_expr()
        self.expect("end")
        return node

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.here.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.here.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        if self.here.kind == "-":
            self.advance()
            return Neg(self.parse_factor())
        node = self.parse_atom()
        if self.here.kind == "^":
            self.advance()
            node = Pow(node, self.parse_exponent())
        return node

    def parse_exponent(self) -> Expr:
        if self.here.kind == "int":
            return Num(Q(self.advance().text))
        if self.here.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise self.fail("integer", "(")

    def parse_atom(self) -> Expr:
        tok = self.here
        if tok.kind == "int":
            self.advance()
            return Num(Q(tok.text))
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "name":
            if tok.text in ("abs", "min", "max"):
                self.advance()
                self.expect("(")
                args = [self.parse_expr()]
                while self.here.kind == ",":
                    self.advance()
                    args.append(self.parse_expr())
                self.expect(")")
                return Call(tok.text, tuple(args))
            if tok.text == "O":
                self.advance()
                self.expect("(")
                inner = self.parse_expr()
                self.expect(")")
                return BigO(inner)
            self.advance()
            return Name(tok.text)
        raise self.fail("number", "name", "(")

    def parse_interval(self) -> IntervalNode:
        tok = self.here
        if tok.kind not in ("[", "("):
            raise self.fail("[", "(")
        closed_left = self.advance().kind == "["
        lo = self.parse_expr()
        self.expect(",")
        hi = self.parse_expr()
        closer = self.here
        if closer.kind not in ("]", ")"):
            raise self.fail("]", ")")
        closed_right = self.advance().kind == "]"
        return IntervalNode(lo, hi, closed_left, closed_right)

    def parse_piecewise(self) -> PiecewiseNode:
        self.advance()  # 'piecewise'
        self.expect("{")
        pieces = []
        while True:
            interval = self.parse_interval()
            self.expect(":")
            pieces.append((interval, self.parse_expr()))
            if self.here.kind == ";":
                self.advance()
                if self.here.kind == "}":
                    break
                continue
            break
        self.expect("}")
        return PiecewiseNode(tuple(pieces))

    def parse_set(self) -> SetNode:
        self.advance()  # 'set'
        self.expect("{")
        intervals = []
        if self.here.kind != "}":
            intervals.append(self.parse_interval())
            while self.here.kind == "|":
                self.advance()
                intervals.append(self.parse_interval())
        self.expect("}")
        return SetNode(tuple(intervals))

    def parse_stream(self) -> StreamNode:
        self.advance()  # 'stream'
        self.expect("(")
        var = self.expect("name").text
        self.expect("->")
        interval = self.parse_interval()
        self.expect(",")
        bound = self.parse_expr()
        self.expect(")")
        return StreamNode(var, interval, bound)


def parse(source: str) -> TopLevel:
    """Parse a top-level input: expression, piecewise, set, or stream."""
    return _Parser(tokenize(source)).parse_top()


def parse_expression(source: str) -> Expr:
    """Parse a plain arithmetic expression (no piecewise/set/stream)."""
    parser = _Parser(tokenize(source))
    node = parser.parse_expr()
    parser.expect("end")
    return node


def parse_interval(source: str) -> IntervalNode:
    """Parse a standalone interval such as `[0,1]` or `(d, 2*d]`."""
    parser = _Parser(tokenize(source))
    node = parser.parse_interval()
    parser.expect("end")
    return node
