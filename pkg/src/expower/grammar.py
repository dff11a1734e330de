"""Expression grammar for polynomials, rational functions and series literals.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')' | ('exp' | 'log') '(' expr ')'

Whitespace is ignored and names match ``[a-z][a-z0-9]*``. Without ``exp`` or
``log`` the value is a RatFunc; with them it is a TruncatedSeries, which
requires a series context (series variables, truncation order, field).
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .arith import QQ, Field, RatFunc

FUNCTIONS = ("exp", "log")
_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message, col=None):
        self.message = message
        self.col = col
        super().__init__(message if col is None else f"column {col}: {message}")


@dataclass(frozen=True)
class SeriesContext:
    variables: tuple
    order: int
    field: Field = QQ


def tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("int", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r}", start + 1)
            tokens.append(("sym", sym, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, series):
        self.tokens = tokenize(text)
        self.i = 0
        self.variables = variables
        self.series = series

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val, pos = self.take()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}", pos + 1)

    def parse(self):
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos + 1)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "sym" and val in "*/":
                self.take()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if not rhs:
                        raise ParseError("division by zero", pos + 1)
                    value = value / rhs
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "sym" and val == "^":
            self.take()
            sign = 1
            kind, val, pos = self.peek()
            if kind == "sym" and val == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer", pos + 1)
            if sign < 0 and not base:
                raise ParseError("negative power of zero", pos + 1)
            return base ** (sign * val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return RatFunc.constant(val)
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return self.apply(val, arg, pos)
            if self.variables is not None and val not in self.variables:
                raise ParseError(f"undeclared variable {val!r}", pos + 1)
            return RatFunc.var(val)
        if kind == "sym" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of expression", pos + 1)
        raise ParseError(f"unexpected {val!r}", pos + 1)

    def apply(self, func, arg, pos):
        from .expseries import SeriesDomainError, TruncatedSeries

        if self.series is None:
            raise ParseError(f"{func}() needs series variables and a truncation order", pos + 1)
        if not isinstance(arg, TruncatedSeries):
            ctx = self.series
            try:
                arg = TruncatedSeries.from_ratfunc(arg, ctx.variables, ctx.order, ctx.field)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), pos + 1) from exc
        try:
            return arg.exp() if func == "exp" else arg.log()
        except SeriesDomainError as exc:
            raise ParseError(str(exc), pos + 1) from exc


def parse_expr(text, variables=None, series=None):
    """Parse ``text`` into a RatFunc (or a TruncatedSeries if exp/log occur).

    ``variables`` restricts the admissible names; ``series`` is a
    SeriesContext enabling ``exp`` and ``log``.
    """
    if not text.strip():
        raise ParseError("empty expression", 1)
    try:
        return _Parser(text, variables, series).parse()
    except ZeroDivisionError as exc:
        raise ParseError(str(exc)) from exc


def parse_rational(text):
    value = parse_expr(text, variables=set())
    return value.constant_value() if isinstance(value, RatFunc) else Fraction(value)


def split_top_level(text, sep=","):
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]
