"""Expression DSL for metric, potential and vector-field components.

Grammar (recursive descent, standard precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom '^' exponent        (right associative)
    atom    := number | name | name '(' expr ')' | '(' expr ')'

Names resolve to chart coordinates; ``pi`` is a literal; the callable
names are exp, log, sin, cos, sinh, cosh, sqrt.  Exponents must be numeric
literals (optionally signed), which keeps evaluation closed over jets.
The parser is whitespace-insensitive and reports byte offsets on errors.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .jets import Jet, JetDomainError

FUNCTION_NAMES = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt")


class ParseError(ValueError):
    """Syntax or name-resolution failure, carrying the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalDomainError(ValueError):
    """Evaluation hit a domain guard (outside box, log of <= 0, ...)."""


# ---------------------------------------------------------------------------
# expression tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Coord:
    slot: int
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: float


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Num | Coord | Neg | Bin | Pow | Call

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if stripped == "":
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        kind = m.lastgroup
        if kind == "num":
            tokens.append(("num", m.group(0).strip(), m.start(kind)))
        else:
            tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, coords: list[str]):
        self.tokens = _tokenize(text)
        self.k = 0
        self.coords = {name: i for i, name in enumerate(coords)}

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value: str):
        kind, text, off = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end'!r}", off)

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, off = self.peek()
        if kind != "eof":
            raise ParseError(f"trailing input {text!r}", off)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            e = Bin(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            e = Bin(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.next()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> float:
        sign = 1.0
        if self.peek()[1] == "-":
            self.next()
            sign = -1.0
        if self.peek()[1] == "(":
            self.next()
            val = self.exponent()
            self.expect(")")
        else:
            kind, text, off = self.next()
            if kind != "num":
                raise ParseError("exponent must be a numeric literal", off)
            val = float(text)
        if self.peek()[1] == "^":  # right-associative literal towers
            self.next()
            val = val ** self.exponent()
        return sign * val

    def atom(self) -> Expr:
        kind, text, off = self.next()
        if kind == "num":
            return Num(float(text))
        if text == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if text in FUNCTION_NAMES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text == "pi":
                return Num(math.pi)
            if text in self.coords:
                return Coord(self.coords[text], text)
            raise ParseError(f"unknown identifier {text!r}", off)
        raise ParseError(f"unexpected token {text or 'end'!r}", off)


def parse_expr(text: str, coords: list[str]) -> Expr:
    """Parse ``text`` over the given coordinate names."""
    return _Parser(text, list(coords)).parse()


def pretty(e: Expr) -> str:
    """Fully parenthesised rendering; reparsing gives an identical tree."""
    match e:
        case Num(v):
            return repr(v) if v >= 0 else f"({v!r})"
        case Coord(_, name):
            return name
        case Neg(a):
            return f"(-{pretty(a)})"
        case Bin(op, a, b):
            return f"({pretty(a)}{op}{pretty(b)})"
        case Pow(base, r):
            exp = f"{r!r}" if r >= 0 else f"({r!r})"
            return f"({pretty(base)}^{exp})"
        case Call(fn, a):
            return f"{fn}({pretty(a)})"
    raise TypeError(e)


def eval_expr(e: Expr, point: np.ndarray) -> float:
    """Plain recursive evaluation at a point (no derivatives)."""
    match e:
        case Num(v):
            return v
        case Coord(slot, _):
            return float(point[slot])
        case Neg(a):
            return -eval_expr(a, point)
        case Bin(op, a, b):
            x, y = eval_expr(a, point), eval_expr(b, point)
            if op == "+":
                return x + y
            if op == "-":
                return x - y
            if op == "*":
                return x * y
            if y == 0.0:
                raise EvalDomainError("division by zero")
            return x / y
        case Pow(base, r):
            x = eval_expr(base, point)
            if x <= 0 and not float(r).is_integer():
                raise EvalDomainError(f"fractional power of non-positive {x}")
            return x ** r
        case Call(fn, a):
            x = eval_expr(a, point)
            if fn == "log" and x <= 0:
                raise EvalDomainError(f"log of non-positive {x}")
            if fn == "sqrt" and x <= 0:
                raise EvalDomainError(f"sqrt of non-positive {x}")
            return getattr(math, fn)(x)
    raise TypeError(e)


def eval_expr_jet(e: Expr, point: np.ndarray, order: int) -> Jet:
    """Exact jet of the expression at ``point`` to the given order."""
    dim = len(point)

    def rec(node: Expr) -> Jet:
        match node:
            case Num(v):
                return Jet.lift(v, dim, order)
            case Coord(slot, _):
                return Jet.lift(float(point[slot]), dim, order, slot=slot)
            case Neg(a):
                return -rec(a)
            case Bin(op, a, b):
                x, y = rec(a), rec(b)
                if op == "+":
                    return x + y
                if op == "-":
                    return x - y
                if op == "*":
                    return x * y
                return x / y
            case Pow(base, r):
                return jets.power(rec(base), r)
            case Call(fn, a):
                return jets.FUNCTIONS[fn](rec(a))
        raise TypeError(node)

    try:
        return rec(e)
    except JetDomainError as err:
        raise EvalDomainError(str(err)) from err


# ---------------------------------------------------------------------------
# geometry specification files
# ---------------------------------------------------------------------------

@dataclass
class GeometrySpec:
    """A chart: coordinates, domain box, metric entries and optional fields.

    Metric entries are expression source strings; the lower triangle is
    required and mirrored, so the parsed matrix is symmetric by
    construction.  ``x_components`` are contravariant (the geometry layer
    lowers the index internally).
    """

    name: str
    dim: int
    coords: list[str]
    domain: list[tuple[float, float]]
    metric: list[list[str]]            # full m x m, mirrored from input
    u: str | None = None
    f: str | None = None
    x_components: list[str] | None = None
    lam: float | None = None
    metric_exprs: list[list[Expr]] = field(default_factory=list, repr=False)
    u_expr: Expr | None = field(default=None, repr=False)
    f_expr: Expr | None = field(default=None, repr=False)
    x_exprs: list[Expr] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.dim < 2:
            raise ParseError("dim must be at least 2", 0)
        if len(self.coords) != self.dim:
            raise ParseError("coords length must equal dim", 0)
        if len(self.domain) != self.dim:
            raise ParseError("domain length must equal dim", 0)
        for lo, hi in self.domain:
            if not lo < hi:
                raise ParseError(f"empty domain interval [{lo}, {hi}]", 0)
        self.metric = _mirror_metric(self.metric, self.dim, self.coords)
        self.metric_exprs = [
            [parse_expr(t, self.coords) for t in row] for row in self.metric
        ]
        self.u_expr = parse_expr(self.u, self.coords) if self.u is not None else None
        self.f_expr = parse_expr(self.f, self.coords) if self.f is not None else None
        if self.x_components is not None:
            if len(self.x_components) != self.dim:
                raise ParseError("X must have one component per coordinate", 0)
            self.x_exprs = [parse_expr(t, self.coords) for t in self.x_components]

    # -- JSON wire format ----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "dim": self.dim,
            "coords": list(self.coords),
            "domain": [[lo, hi] for lo, hi in self.domain],
            "metric": [list(row) for row in self.metric],
        }
        if self.u is not None:
            doc["u"] = self.u
        if self.f is not None:
            doc["f"] = self.f
        if self.x_components is not None:
            doc["X"] = list(self.x_components)
        if self.lam is not None:
            doc["lambda"] = self.lam
        return json.dumps(doc, indent=2)

    @staticmethod
    def from_json(text: str) -> "GeometrySpec":
        doc = json.loads(text)
        return GeometrySpec(
            name=doc["name"],
            dim=doc["dim"],
            coords=list(doc["coords"]),
            domain=[(float(lo), float(hi)) for lo, hi in doc["domain"]],
            metric=[list(row) for row in doc["metric"]],
            u=doc.get("u"),
            f=doc.get("f"),
            x_components=doc.get("X"),
            lam=doc.get("lambda"),
        )

    def contains(self, point: np.ndarray) -> bool:
        return all(
            lo <= x <= hi for x, (lo, hi) in zip(point, self.domain)
        )


def _mirror_metric(rows: list[list[str]], dim: int,
                   coords: list[str]) -> list[list[str]]:
    if len(rows) != dim:
        raise ParseError(f"metric must have {dim} rows", 0)
    full: list[list[str | None]] = [[None] * dim for _ in range(dim)]
    for i, row in enumerate(rows):
        if len(row) not in (i + 1, dim):
            raise ParseError(
                f"metric row {i} must have {i + 1} (lower triangle) or {dim} entries",
                0,
            )
        for j, text in enumerate(row):
            full[i][j] = text
    for i in range(dim):
        for j in range(i + 1, dim):
            if full[i][j] is None:
                full[i][j] = full[j][i]
            elif full[j][i] is not None and parse_expr(
                full[i][j], coords
            ) != parse_expr(full[j][i], coords):
                raise ParseError(
                    f"metric entries ({i},{j}) and ({j},{i}) are not mirror images", 0
                )
    return [[t for t in row] for row in full]  # type: ignore[misc]
