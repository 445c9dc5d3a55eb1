"""Formula language for decision models.

Formulas are short arithmetic expressions over named inputs, e.g.::

    EV - AC
    0.4 * (Rs + 50) * T / (T + 15)
    arccos(-tan(phi) * tan(delta))

``parse`` turns text into an immutable tree, ``free_variables`` lists the
names the tree reads, ``evaluate`` computes its value against an environment,
and ``unparse`` prints a tree back so that ``parse(unparse(e))`` reproduces
``e`` exactly.

Operators are ``+ - * / ^`` with the usual precedence: ``^`` binds tightest
and is right-associative, then unary minus, then ``* /``, then ``+ -``, all
left-associative.  ``pi`` is a built-in constant.  The function set is fixed:
``sin cos tan arccos arcsin sqrt abs`` take one argument, ``min max`` take
two.  Angles are radians; all numbers are IEEE doubles.  Identifiers are
case-sensitive.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

__all__ = [
    "Expression",
    "Literal",
    "Symbol",
    "Constant",
    "Negate",
    "Binary",
    "Call",
    "FUNCTIONS",
    "ExpressionError",
    "ExpressionSyntaxError",
    "ArityError",
    "UnboundSymbolError",
    "DivisionByZeroError",
    "DomainError",
    "parse",
    "free_variables",
    "evaluate",
    "unparse",
    "format_number",
]

IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

#: Function name -> arity.  Fixed; there are no user-defined functions.
FUNCTIONS: dict[str, int] = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "arccos": 1,
    "arcsin": 1,
    "sqrt": 1,
    "abs": 1,
    "min": 2,
    "max": 2,
}


# ---------------------------------------------------------------------------
# Syntax tree


@dataclass(frozen=True)
class Literal:
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class Symbol:
    name: str

    def __post_init__(self) -> None:
        if not IDENTIFIER_RE.match(self.name or ""):
            raise ValueError(f"invalid symbol name {self.name!r}")


@dataclass(frozen=True)
class Constant:
    name: str  # only "pi"


@dataclass(frozen=True)
class Negate:
    operand: "Expression"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expression", ...]


Expression = Union[Literal, Symbol, Constant, Negate, Binary, Call]


# ---------------------------------------------------------------------------
# Errors


class ExpressionError(Exception):
    """Base class for formula parse and evaluation failures."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityError(ExpressionError):
    def __init__(self, name: str, expected: int, got: int, position: int):
        super().__init__(
            f"function '{name}' takes {expected} argument(s), got {got}"
            f" (at position {position})"
        )
        self.name = name
        self.expected = expected
        self.got = got
        self.position = position


class UnboundSymbolError(ExpressionError):
    def __init__(self, name: str):
        super().__init__(f"unbound symbol '{name}'")
        self.name = name


class DivisionByZeroError(ExpressionError):
    def __init__(self, context: str):
        super().__init__(f"division by zero in '{context}'")
        self.context = context


class DomainError(ExpressionError):
    def __init__(self, reason: str, context: str):
        super().__init__(f"{reason} in '{context}'")
        self.reason = reason
        self.context = context


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"""
      (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>[-+*/^(),])
    | (?P<space>\s+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "name" | "punct" | "end"
    text: str
    pos: int


def _tokenize(source: str) -> Iterator[_Token]:
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup or ""
        if kind != "space":
            yield _Token(kind, m.group(), pos)
        pos = m.end()
    yield _Token("end", "", len(source))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = list(_tokenize(source))
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.current
        if tok.kind != "end":
            self.index += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.current
        if tok.kind != "punct" or tok.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}", tok.pos)
        return self.advance()

    def at(self, text: str) -> bool:
        return self.current.kind == "punct" and self.current.text == text

    # expression := term (('+'|'-') term)*
    def expression(self) -> Expression:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    # term := factor (('*'|'/') factor)*
    def term(self) -> Expression:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    # factor := '-' factor | power
    def factor(self) -> Expression:
        if self.at("-"):
            self.advance()
            return Negate(self.factor())
        return self.power()

    # power := atom ('^' factor)?   -- right-associative via factor
    def power(self) -> Expression:
        node = self.atom()
        if self.at("^"):
            self.advance()
            return Binary("^", node, self.factor())
        return node

    def atom(self) -> Expression:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Literal(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if self.at("("):
                return self.call(tok)
            if tok.text == "pi":
                return Constant("pi")
            return Symbol(tok.text)
        if self.at("("):
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(
            "expected a number, name or '('" if tok.kind != "end" else "unexpected end of input",
            tok.pos,
        )

    def call(self, name_tok: _Token) -> Expression:
        if name_tok.text not in FUNCTIONS:
            raise ExpressionSyntaxError(f"unknown function '{name_tok.text}'", name_tok.pos)
        self.expect("(")
        args = [self.expression()]
        while self.at(","):
            self.advance()
            args.append(self.expression())
        self.expect(")")
        expected = FUNCTIONS[name_tok.text]
        if len(args) != expected:
            raise ArityError(name_tok.text, expected, len(args), name_tok.pos)
        return Call(name_tok.text, tuple(args))


def parse(source: str) -> Expression:
    """Parse formula text into an expression tree.

    Raises :class:`ExpressionSyntaxError` (with position) on malformed input
    and :class:`ArityError` on a wrong function argument count.
    """
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    parser = _Parser(source)
    node = parser.expression()
    trailing = parser.current
    if trailing.kind != "end":
        raise ExpressionSyntaxError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return node


# ---------------------------------------------------------------------------
# Inspection


def free_variables(expr: Expression) -> frozenset[str]:
    """The exact set of symbol names read by ``expr`` (constants excluded)."""
    out: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Symbol):
            out.add(node.name)
        elif isinstance(node, Negate):
            stack.append(node.operand)
        elif isinstance(node, Binary):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, Call):
            stack.extend(node.args)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(expr: Expression, env: Mapping[str, float]) -> float:
    """Evaluate ``expr`` with symbol values taken from ``env``.

    Standard real arithmetic; angles are radians.  Raises
    :class:`UnboundSymbolError`, :class:`DivisionByZeroError` or
    :class:`DomainError` (each naming the offending subexpression).
    Deterministic: the same tree and environment always produce the
    bit-identical result.
    """
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Constant):
        return math.pi
    if isinstance(expr, Symbol):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundSymbolError(expr.name) from None
    if isinstance(expr, Negate):
        return -evaluate(expr.operand, env)
    if isinstance(expr, Binary):
        left = evaluate(expr.left, env)
        right = evaluate(expr.right, env)
        return _apply_binary(expr, left, right)
    if isinstance(expr, Call):
        args = [evaluate(arg, env) for arg in expr.args]
        return _apply_function(expr, args)
    raise TypeError(f"not an expression node: {expr!r}")


def _apply_binary(node: Binary, left: float, right: float) -> float:
    op = node.op
    if op == "+":
        value = left + right
    elif op == "-":
        value = left - right
    elif op == "*":
        value = left * right
    elif op == "/":
        if right == 0.0:
            raise DivisionByZeroError(unparse(node))
        value = left / right
    elif op == "^":
        if left == 0.0 and right < 0.0:
            raise DivisionByZeroError(unparse(node))
        if left < 0.0 and not float(right).is_integer():
            raise DomainError("fractional power of a negative base", unparse(node))
        try:
            value = left**right
        except OverflowError:
            raise DomainError("result overflow", unparse(node)) from None
    else:
        raise TypeError(f"unknown operator {op!r}")
    if not math.isfinite(value):
        raise DomainError("result overflow", unparse(node))
    return value


def _apply_function(node: Call, args: list[float]) -> float:
    name = node.name
    try:
        if name == "sin":
            return math.sin(args[0])
        if name == "cos":
            return math.cos(args[0])
        if name == "tan":
            value = math.tan(args[0])
        elif name == "arccos":
            value = math.acos(args[0])
        elif name == "arcsin":
            value = math.asin(args[0])
        elif name == "sqrt":
            value = math.sqrt(args[0])
        elif name == "abs":
            return abs(args[0])
        elif name == "min":
            return min(args)
        elif name == "max":
            return max(args)
        else:
            raise TypeError(f"unknown function {name!r}")
    except ValueError:
        raise DomainError("argument outside function domain", unparse(node)) from None
    if not math.isfinite(value):
        raise DomainError("result overflow", unparse(node))
    return value


# ---------------------------------------------------------------------------
# Printing


def format_number(value: float) -> str:
    """Shortest lossless decimal text for a float; integral values drop the dot."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


_BINARY_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_PREC_NEGATE = 3
_PREC_ATOM = 5


def _prec(expr: Expression) -> int:
    if isinstance(expr, Binary):
        return _BINARY_PREC[expr.op]
    if isinstance(expr, Negate):
        return _PREC_NEGATE
    return _PREC_ATOM


def unparse(expr: Expression, *, full_parens: bool = False) -> str:
    """Canonical text for a tree; ``parse(unparse(e))`` is structurally ``e``.

    With ``full_parens=True`` every compound subexpression is parenthesized
    (useful as an oracle: the grouping is forced regardless of precedence).
    """
    if isinstance(expr, Literal):
        return format_number(expr.value)
    if isinstance(expr, (Symbol, Constant)):
        return expr.name
    if isinstance(expr, Call):
        args = ", ".join(unparse(a, full_parens=full_parens) for a in expr.args)
        return f"{expr.name}({args})"
    if isinstance(expr, Negate):
        inner = unparse(expr.operand, full_parens=full_parens)
        if not full_parens and _prec(expr.operand) < _PREC_NEGATE:
            inner = f"({inner})"
        text = f"-{inner}"
        return f"({text})" if full_parens else text
    if isinstance(expr, Binary):
        prec = _BINARY_PREC[expr.op]
        left = unparse(expr.left, full_parens=full_parens)
        right = unparse(expr.right, full_parens=full_parens)
        if not full_parens:
            # '^' is right-associative, everything else left-associative;
            # its exponent may be a unary-minus chain without parens.
            if expr.op == "^":
                if _prec(expr.left) <= prec:
                    left = f"({left})"
                if _prec(expr.right) < _PREC_NEGATE:
                    right = f"({right})"
            else:
                if _prec(expr.left) < prec:
                    left = f"({left})"
                if _prec(expr.right) <= prec:
                    right = f"({right})"
        text = f"{left} {expr.op} {right}"
        return f"({text})" if full_parens else text
    raise TypeError(f"not an expression node: {expr!r}")
