"""A small recursive-descent parser for complex expressions in ``z``.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | NUMBER 'i' | NAME | NAME '(' expr ')' | '(' expr ')'

Names: ``z``, the constants ``pi``, ``e`` and ``i``, and the functions
``exp log sin cos tan sqrt``. ``log`` and ``sqrt`` are principal branches with
the cut on the negative real axis; points on the cut take the value from its
upper side, so ``sqrt(-1) = i``. ``**`` is accepted as a synonym for ``^``.
Evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, src: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.src = src


class UnknownIdentifierError(ParseError):
    pass


def _upper_side(w):
    w = np.asarray(w, dtype=complex)
    return np.where(w.imag == 0, w.real + 0j, w)


def _sqrt(w):
    return np.sqrt(_upper_side(w))


def _log(w):
    return np.log(_upper_side(w))


FUNCTIONS = {
    "exp": np.exp,
    "log": _log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sqrt": _sqrt,
}
CONSTANTS = {"pi": complex(np.pi), "e": complex(np.e), "i": 1j}


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<pow>\*\*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    offset: int


def tokenize(src: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        if kind == "pow":
            tokens.append(Token("op", "^", pos))
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "end":
            raise ParseError(f"expected {text!r}", self.tok.offset, self.src)
        self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset, self.src)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            operand = self.unary()
            return Neg(operand) if op == "-" else operand
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            if t.text.endswith("i"):
                return Num(complex(0.0, float(t.text[:-1])))
            return Num(complex(float(t.text)))
        if t.kind == "name":
            self.advance()
            if t.text == "z":
                return Var()
            if t.text in CONSTANTS:
                return Const(t.text)
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            raise UnknownIdentifierError(f"unknown identifier {t.text!r}", t.offset, self.src)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset, self.src)


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree.

    Raises:
        ParseError: malformed input; ``offset`` is the character offset.
        UnknownIdentifierError: a name other than ``z``, a constant or a function.
    """
    return _Parser(src).parse()


# --- evaluation ------------------------------------------------------------


def _int_exponent(node: Expr):
    if isinstance(node, Num) and node.value.imag == 0 and node.value.real == int(node.value.real):
        k = int(node.value.real)
        if abs(k) <= 64:
            return k
    if isinstance(node, Neg):
        k = _int_exponent(node.operand)
        return None if k is None else -k
    return None


def _ipow(x, k: int):
    if k < 0:
        return 1.0 / _ipow(x, -k)
    result = np.ones_like(x)
    base = x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def eval_expr(e: Expr, z):
    """Evaluate ``e`` at ``z`` (scalar or array); non-finite values propagate."""
    zv = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        out = _eval(e, zv)
    out = np.broadcast_to(out, zv.shape).astype(complex)
    return complex(out) if zv.ndim == 0 else out


def _eval(e: Expr, z):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, z)
    if isinstance(e, Call):
        return FUNCTIONS[e.func](_eval(e.arg, z))
    left = np.asarray(_eval(e.left, z), dtype=complex)
    if e.op == "^":
        k = _int_exponent(e.right)
        if k is not None:
            return _ipow(left, k)
        return np.power(left, _eval(e.right, z))
    right = _eval(e.right, z)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    return left / right


# --- printing --------------------------------------------------------------


def _fmt_number(v: complex) -> str:
    if v.imag == 0:
        return repr(v.real)
    if v.real == 0:
        return repr(v.imag) + "i"
    return f"({v.real!r}+{v.imag!r}i)"


def to_string(e: Expr) -> str:
    """Fully parenthesized canonical form; ``parse(to_string(e)) == e``."""
    if isinstance(e, Num):
        v = e.value
        if v.imag == 0 and v.real < 0 or v.real == 0 and v.imag < 0:
            return f"(-{_fmt_number(-v)})"
        return _fmt_number(v)
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_string(e.operand)})"
    if isinstance(e, Call):
        return f"{e.func}({to_string(e.arg)})"
    return f"({to_string(e.left)}{e.op}{to_string(e.right)})"


def compile_expr(src: str):
    """Parse ``src`` and return a vectorized callable ``z -> value``."""
    tree = parse(src)
    return lambda z: eval_expr(tree, z)


def expression_handle(src: str, dsrc: str | None = None, deriv_cfg=None, name: str | None = None):
    """A :class:`FunctionHandle` for ``src``.

    With ``dsrc`` the derivative is that expression; otherwise it is
    computed from ``src`` by the Cauchy-integral trapezium rule.
    """
    from .handle import FunctionHandle
    from .numderiv import DerivConfig, wrap_derivative_free

    f = compile_expr(src)
    label = name or src
    if dsrc is not None:
        return FunctionHandle(f, compile_expr(dsrc), name=label)
    return wrap_derivative_free(f, deriv_cfg or DerivConfig(), name=label)
