"""Instance files: a small line-oriented format read by the command line tool.

Format version 1::

    # comments run to the end of the line
    format 1
    vars p:power q:generic t:series T=16 D=4 seed=0
    mulind: 2, 4
    ax: z = t, t^2; m = 1
    chain: x = q
    powers: z = t, p*t
    powers: x = t, t^2          # etpower mode: z = (x, p x)

Statements are separated by newlines or by ``;`` outside parentheses. A
section header ``kind:`` opens a section; ``key = value`` statements after
it (on the same line or later lines) are fields of that section. Header
statements (``format``, ``vars``, ``T=``, ``D=``, ``seed=``) come before
the first section. Every declared variable belongs to exactly one of the
alphabets ``power`` (the exponents p), ``generic`` (further field
variables) and ``series`` (the series variables t).

Sections and their fields:

=========  ===========================================================
mulind     ``y`` (positive rationals, also accepted bare), ``expect``
ldim       ``K`` (``Q`` or variable names, default ``Q``), ``X``, ``Y``, ``ker``, ``expect``
disjoint   ``K``, ``L`` (generators), ``samples``, ``expect``
chain      ``x``, ``k``, ``p``, ``dims``
ax         ``z``, ``m``, ``D``, ``T``
powers     ``z`` or ``x`` (etpower mode), ``ker``, ``p``, ``D``, ``T``
expalg     ``f`` (polynomials in x1.., y1..), ``x``, ``total``, ``expect``
relsearch  ``g`` (series), ``D``, ``T``
=========  ===========================================================
"""

import re
from dataclasses import dataclass, field

from .arith import Field
from .grammar import FUNCTIONS, ParseError, SeriesContext, parse_expr, split_top_level

FORMAT_VERSION = 1
ALPHABETS = ("power", "generic", "series")
HEADER_KEYS = ("T", "D", "seed")
DEFAULTS = {"T": 16, "D": 4, "seed": 0}

SECTION_FIELDS = {
    "mulind": ("y", "expect"),
    "ldim": ("K", "X", "Y", "ker", "expect"),
    "disjoint": ("K", "L", "samples", "expect"),
    "chain": ("x", "k", "p", "dims"),
    "ax": ("z", "m", "D", "T"),
    "powers": ("z", "x", "ker", "p", "D", "T"),
    "expalg": ("f", "x", "total", "expect"),
    "relsearch": ("g", "D", "T"),
}
REQUIRED = {
    "mulind": ("y",), "ldim": ("X",), "disjoint": ("K", "L"), "chain": ("x",),
    "ax": ("z",), "powers": (), "expalg": ("f", "x"), "relsearch": ("g",),
}
_NAME = re.compile(r"[a-z][a-z0-9]*$")
_KEY = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*)\s*=")


class InstanceError(ValueError):
    def __init__(self, message, line, col):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass
class Header:
    version: int = FORMAT_VERSION
    alphabets: dict = field(default_factory=lambda: {a: () for a in ALPHABETS})
    T: int = DEFAULTS["T"]
    D: int = DEFAULTS["D"]
    seed: int = DEFAULTS["seed"]

    @property
    def power(self):
        return self.alphabets["power"]

    @property
    def generic(self):
        return self.alphabets["generic"]

    @property
    def series(self):
        return self.alphabets["series"]

    @property
    def declared(self):
        return set(self.power) | set(self.generic) | set(self.series)


@dataclass
class RawField:
    text: str
    line: int
    col: int


@dataclass
class Section:
    kind: str
    line: int
    col: int
    index: int
    fields: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def label(self):
        return f"{self.kind}#{self.index}"


@dataclass
class InstanceFile:
    header: Header
    sections: list
    text: str = ""

    def of_kind(self, *kinds):
        return [s for s in self.sections if s.kind in kinds]


def _statements(text):
    """Yield ``(line, col, statement)`` with 1-based positions of the first
    non-blank character."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        depth, start = 0, 0
        for i, ch in enumerate(line + ";"):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == ";" and depth <= 0:
                piece = line[start:i]
                if piece.strip():
                    lead = len(piece) - len(piece.lstrip())
                    yield lineno, start + lead + 1, piece.strip()
                start = i + 1


def _int(text, line, col, name, minimum=0):
    try:
        v = int(text.strip())
    except ValueError:
        raise InstanceError(f"{name} must be an integer, got {text.strip()!r}", line, col) from None
    if v < minimum:
        raise InstanceError(f"{name} must be >= {minimum}", line, col)
    return v


def _header_setting(header, key, value, line, col):
    minimum = 0 if key == "seed" else 1
    setattr(header, key, _int(value, line, col, key, minimum))


def _parse_vars(header, body, line, col):
    seen = {v: a for a, vs in header.alphabets.items() for v in vs}
    for m in re.finditer(r"\S+", body):
        tok, tcol = m.group(), col + m.start()
        if "=" in tok:
            key, _, value = tok.partition("=")
            if key not in HEADER_KEYS:
                raise InstanceError(f"unknown header setting {key!r}", line, tcol)
            _header_setting(header, key, value, line, tcol + len(key) + 1)
            continue
        name, sep, kind = tok.partition(":")
        if not sep:
            raise InstanceError(f"expected name:kind, got {tok!r}", line, tcol)
        if not _NAME.match(name) or name in FUNCTIONS:
            raise InstanceError(f"invalid variable name {name!r}", line, tcol)
        if kind not in ALPHABETS:
            raise InstanceError(f"unknown alphabet {kind!r} (use power, generic or series)",
                                line, tcol + len(name) + 1)
        if name in seen:
            raise InstanceError(f"alphabet collision: {name!r} already declared as {seen[name]}",
                                line, tcol)
        seen[name] = kind
        header.alphabets[kind] = header.alphabets[kind] + (name,)


def parse_instance(text):
    """Parse and validate an instance file; raises InstanceError with a
    line and column on any problem."""
    header = Header()
    sections = []
    current = None
    for line, col, stmt in _statements(text):
        head, _, rest = stmt.partition(":")
        word = head.strip()
        if word in SECTION_FIELDS and _ == ":" and "=" not in head:
            current = Section(word, line, col, len(sections) + 1)
            sections.append(current)
            rest_col = col + len(head) + 1
            if rest.strip():
                lead = len(rest) - len(rest.lstrip())
                _section_statement(current, rest.strip(), line, rest_col + lead)
            continue
        if stmt.startswith("format") and (len(stmt) == 6 or stmt[6].isspace()):
            _require_header(current, line, col)
            header.version = _int(stmt[6:], line, col + 7, "format")
            if header.version != FORMAT_VERSION:
                raise InstanceError(f"unsupported format version {header.version}", line, col)
            continue
        if stmt.startswith("vars") and (len(stmt) == 4 or stmt[4].isspace()):
            _require_header(current, line, col)
            _parse_vars(header, stmt[4:], line, col + 4)
            continue
        m = _KEY.match(stmt)
        if m and current is None:
            if m.group(1) not in HEADER_KEYS:
                raise InstanceError(f"unknown header setting {m.group(1)!r}", line, col)
            _header_setting(header, m.group(1), stmt[m.end():], line, col + m.end())
            continue
        if current is None:
            raise InstanceError(f"expected a header statement or a section, got {stmt!r}",
                                line, col)
        _section_statement(current, stmt, line, col)
    for s in sections:
        _finish(s, header)
    return InstanceFile(header, sections, text)


def _require_header(current, line, col):
    if current is not None:
        raise InstanceError("header statements must precede the first section", line, col)


def _section_statement(section, stmt, line, col):
    m = _KEY.match(stmt)
    if not m:
        if section.kind == "mulind" and "y" not in section.fields:
            section.fields["y"] = RawField(stmt, line, col)
            return
        raise InstanceError(f"expected key = value in {section.kind} section", line, col)
    key = m.group(1)
    if key not in SECTION_FIELDS[section.kind]:
        raise InstanceError(f"unknown field {key!r} for {section.kind}", line, col)
    if key in section.fields:
        raise InstanceError(f"field {key!r} given twice", line, col)
    value = stmt[m.end():]
    lead = len(value) - len(value.lstrip())
    section.fields[key] = RawField(value.strip(), line, col + m.end() + lead)


# -- typed field readers -----------------------------------------------------


def _items(f):
    """Comma-separated items of a field with their columns."""
    out, offset = [], 0
    for piece in split_top_level(f.text):
        at = f.text.find(piece, offset) if piece else offset
        out.append((piece, f.col + max(at, 0)))
        offset = max(at, 0) + len(piece)
    if out == [("", f.col)]:
        return []
    for piece, col in out:
        if not piece:
            raise InstanceError("empty list item", f.line, col)
    return out


def _expr(text, line, col, variables=None, series=None):
    try:
        return parse_expr(text, variables=variables, series=series)
    except ParseError as exc:
        at = col + (exc.col - 1 if exc.col else 0)
        raise InstanceError(exc.message, line, at) from None


def _exprs(f, variables=None, series=None):
    return [_expr(t, f.line, c, variables, series) for t, c in _items(f)]


def _rationals(f, positive=False):
    out = []
    for t, c in _items(f):
        v = _expr(t, f.line, c, variables=set())
        if not v.is_constant():
            raise InstanceError(f"{t!r} is not a rational number", f.line, c)
        v = v.constant_value()
        if positive and v <= 0:
            raise InstanceError(f"{t} is not a positive rational", f.line, c)
        out.append(v)
    return out


def _names(f, allowed, what):
    out = []
    for t, c in _items(f):
        if t not in allowed:
            raise InstanceError(f"{t!r} is not a declared {what}", f.line, c)
        out.append(t)
    return out


def _choice(f, options):
    v = f.text.strip()
    if v not in options:
        raise InstanceError(f"expected one of {', '.join(options)}, got {v!r}", f.line, f.col)
    return v


def _series_context(header, section, params, variables=None):
    T = section.data["T"]
    variables = tuple(variables if variables is not None else header.series) or ("t",)
    return SeriesContext(tuple(sorted(variables)), T, Field(tuple(sorted(params))))


def _settings(section, header):
    f = section.fields
    section.data["D"] = _int(f["D"].text, f["D"].line, f["D"].col, "D", 1) if "D" in f else header.D
    section.data["T"] = _int(f["T"].text, f["T"].line, f["T"].col, "T", 1) if "T" in f else header.T
    section.data["seed"] = header.seed


def _power_var(section, header, default_name="p"):
    f = section.fields.get("p")
    if f is not None:
        return _names(f, header.power, "power variable")[0]
    if len(header.power) == 1:
        return header.power[0]
    if not header.power:
        return default_name
    raise InstanceError("several power variables declared; choose one with p = ...",
                        section.line, section.col)


def _finish(section, header):
    f = section.fields
    for key in REQUIRED[section.kind]:
        if key not in f:
            raise InstanceError(f"{section.kind} section needs a {key!r} field",
                                section.line, section.col)
    _settings(section, header)
    d = section.data
    d["source"] = {k: tuple(t for t, _ in _items(v)) for k, v in f.items()}
    fieldvars = set(header.power) | set(header.generic)
    kind = section.kind
    if kind == "mulind":
        d["y"] = _rationals(f["y"], positive=True)
        if not d["y"]:
            raise InstanceError("mulind needs at least one rational", f["y"].line, f["y"].col)
        if "expect" in f:
            d["expect"] = _choice(f["expect"], ("independent", "dependent"))
    elif kind == "ldim":
        d["K"] = _field_spec(f["K"], fieldvars) if "K" in f else ()
        d["X"] = _exprs(f["X"], fieldvars)
        d["Y"] = _exprs(f["Y"], fieldvars) if "Y" in f else []
        d["ker"] = _exprs(f["ker"], fieldvars) if "ker" in f else []
        if "expect" in f:
            d["expect"] = _int(f["expect"].text, f["expect"].line, f["expect"].col, "expect")
    elif kind == "disjoint":
        d["K"] = _exprs(f["K"], fieldvars)
        d["L"] = _exprs(f["L"], fieldvars)
        d["samples"] = (_int(f["samples"].text, f["samples"].line, f["samples"].col, "samples", 1)
                        if "samples" in f else 20)
        if "expect" in f:
            d["expect"] = _choice(f["expect"], ("disjoint_by_criterion", "counterexample",
                                                "inconclusive"))
    elif kind == "chain":
        d["p"] = _power_var(section, header)
        allowed = fieldvars | {d["p"]}
        d["x"] = _exprs(f["x"], allowed)
        d["k"] = _exprs(f["k"], allowed) if "k" in f else []
        for (t, c), v in zip(_items(f["k"]) if "k" in f else [], d["k"]):
            if d["p"] in v.variables:
                raise InstanceError(f"kernel generator {t!r} involves {d['p']}", f["k"].line, c)
        if "dims" in f:
            d["dims"] = tuple(_int(t, f["dims"].line, c, "dims") for t, c in _items(f["dims"]))
    elif kind == "ax":
        variables = header.series
        if "m" in f:
            m = _int(f["m"].text, f["m"].line, f["m"].col, "m", 1)
            if m > len(variables):
                raise InstanceError(f"m = {m} but only {len(variables)} series variable(s) declared",
                                    f["m"].line, f["m"].col)
            variables = variables[:m]
        if not variables:
            raise InstanceError("ax needs declared series variables", section.line, section.col)
        d["variables"] = tuple(sorted(variables))
        ctx = _series_context(header, section, (), d["variables"])
        d["z"] = _exprs(f["z"], set(variables), ctx)
    elif kind == "powers":
        if ("z" in f) == ("x" in f):
            raise InstanceError("powers section needs exactly one of z (or x for etpower mode)",
                                section.line, section.col)
        if not header.series:
            raise InstanceError("powers needs declared series variables", section.line, section.col)
        d["variables"] = tuple(sorted(header.series))
        d["p"] = _power_var(section, header)
        if "x" in f:
            d["mode"] = "etpower"
            d["x"] = _exprs(f["x"], set(header.series))
        else:
            d["mode"] = "powers"
            d["z"] = _exprs(f["z"], set(header.series) | set(header.power) | {d["p"]})
        d["ker"] = _rationals(f["ker"]) if "ker" in f else []
    elif kind == "expalg":
        fs = _items(f["f"])
        n = len(fs)
        names = {f"x{i}" for i in range(1, n + 1)} | {f"y{i}" for i in range(1, n + 1)}
        polys = []
        for t, c in fs:
            v = _expr(t, f["f"].line, c, names)
            if not v.is_polynomial() or any(x.denominator != 1 for x in v.num.terms.values()):
                raise InstanceError(f"{t!r} is not an integer polynomial in x_i, y_i",
                                    f["f"].line, c)
            polys.append(v.num)
        d["f"] = polys
        ctx = _series_context(header, section, ())
        d["variables"] = ctx.variables
        d["x"] = _exprs(f["x"], set(header.series), ctx)
        if len(d["x"]) != n:
            raise InstanceError(f"{n} function(s) need {n} argument(s), got {len(d['x'])}",
                                f["x"].line, f["x"].col)
        d["total"] = (_choice(f["total"], ("yes", "no", "true", "false")) in ("yes", "true")
                      if "total" in f else True)
        d["expect"] = _choice(f["expect"], ("holds", "fails")) if "expect" in f else "holds"
    elif kind == "relsearch":
        if not header.series:
            raise InstanceError("relsearch needs declared series variables",
                                section.line, section.col)
        ctx = _series_context(header, section, header.power)
        d["g"] = _exprs(f["g"], set(header.series) | set(header.power), ctx)
        d["variables"] = ctx.variables
        d["field"] = ctx.field


def _field_spec(f, allowed):
    text = f.text.strip()
    if text == "Q":
        return ()
    return tuple(sorted(_names(f, allowed, "power or generic variable")))
