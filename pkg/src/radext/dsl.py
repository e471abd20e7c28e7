"""Small expression language for curve definitions.

Curves are given as text in the variable ``t`` (radians), e.g. the polar
radius of the unit square ``min(1/abs(sin(t)), 1/abs(cos(t)))`` or an
ellipse ``(cos(t)^2/a^2 + sin(t)^2/b^2)^(-1/2)`` with parameters a, b.

Grammar (EBNF, also documented in the README):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;            (right associative)
    atom    = NUMBER | "pi" | "t" | IDENT
            | IDENT "(" expr { "," expr } ")"
            | "(" expr ")" ;

Precedence: ^  >  unary -  >  * /  >  + - .  There is no implicit
multiplication.  Functions: sin, cos, abs, sqrt, exp, log, min, max,
sign, and the 4-ary selectors selmin/selmax that differentiation emits
for min/max (branch chosen at evaluation time).

Evaluation is IEEE double arithmetic; intermediate infinities are legal
(so ``min(1/abs(sin(t)), 1/abs(cos(t)))`` works at t = 0) and a
DomainError is raised only when the final value is non-finite.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityMismatch,
    DomainError,
    ExprSyntaxError,
    UnboundParameter,
    UnknownFunction,
)

__all__ = [
    "Expr", "Num", "Pi", "Var", "Param", "Neg", "BinOp", "Call",
    "parse", "to_text", "evaluate", "diff", "fold", "free_params",
]


# --- AST -------------------------------------------------------------

class Expr:
    """Base class for expression nodes. Nodes are immutable value objects."""
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Pi(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    """The curve parameter t."""


@dataclass(frozen=True)
class Param(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple


FUNCTIONS = {
    "sin": 1, "cos": 1, "abs": 1, "sqrt": 1, "exp": 1, "log": 1,
    "sign": 1, "min": 2, "max": 2, "selmin": 4, "selmax": 4,
}


# --- tokenizer -------------------------------------------------------

_OPS = set("+-*/^(),")


def _tokenize(text):
    """Yield (kind, value, offset) triples; kind in {num, ident, op, end}."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {c!r}", i, expected=("token",))
    tokens.append(("end", "", n))
    return tokens


# --- parser ----------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", offset, expected=(op,))
        return self.next()

    def parse(self):
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ExprSyntaxError(
                f"unexpected trailing input {value!r}", offset, expected=("end",))
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                node = BinOp(value, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.next()
                node = BinOp(value, node, self.unary())
            else:
                return node

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.next()
            child = self.unary()
            if isinstance(child, Num):
                return Num(-child.value)
            return Neg(child)
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.next()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, value, offset = self.next()
        if kind == "num":
            return Num(float(value))
        if kind == "ident":
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "(":
                if value not in FUNCTIONS:
                    raise UnknownFunction(value, offset)
                self.next()
                args = [self.expr()]
                while True:
                    k2, v2, o2 = self.peek()
                    if k2 == "op" and v2 == ",":
                        self.next()
                        args.append(self.expr())
                    elif k2 == "op" and v2 == ")":
                        self.next()
                        break
                    else:
                        raise ExprSyntaxError(
                            "expected ',' or ')'", o2, expected=(",", ")"))
                if len(args) != FUNCTIONS[value]:
                    raise ArityMismatch(value, FUNCTIONS[value], len(args), offset)
                return Call(value, tuple(args))
            if value == "pi":
                return Pi()
            if value == "t":
                return Var()
            return Param(value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            f"unexpected token {value!r}" if value else "unexpected end of input",
            offset,
            expected=("number", "identifier", "(", "-"),
        )


def parse(text):
    """Parse expression text into an AST. Raises ExprSyntaxError,
    UnknownFunction or ArityMismatch on bad input."""
    return _Parser(text).parse()


# --- printing --------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Num) and node.value < 0:
        return _PREC["neg"]  # prints with a leading '-'
    return _PREC["atom"]


def _fmt_num(value):
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_text(node):
    """Render an AST back to expression text; parse(to_text(e)) is
    structurally identical to e."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Neg):
        inner = to_text(node.child)
        if _prec(node.child) >= _PREC["^"]:
            return "-" + inner
        return "-(" + inner + ")"
    if isinstance(node, Call):
        return node.name + "(" + ", ".join(to_text(a) for a in node.args) + ")"
    if isinstance(node, BinOp):
        lp, rp = _prec(node.left), _prec(node.right)
        p = _PREC[node.op]
        if node.op == "^":
            # '^' binds tightest: parenthesize any non-atomic or negative base
            left = to_text(node.left)
            if lp < _PREC["atom"]:
                left = "(" + left + ")"
            right = to_text(node.right)
            if rp < _PREC["neg"]:
                right = "(" + right + ")"
            return left + "^" + right
        left = to_text(node.left)
        if lp < p:
            left = "(" + left + ")"
        right = to_text(node.right)
        # + - * / are left associative: an equal-precedence right operand
        # would reassociate on reparse, so it needs parens
        if rp <= p:
            right = "(" + right + ")"
        return left + node.op + right
    raise TypeError(f"not an Expr: {node!r}")


# --- evaluation ------------------------------------------------------

def free_params(node):
    """Set of parameter names referenced by the expression."""
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, Neg):
        return free_params(node.child)
    if isinstance(node, BinOp):
        return free_params(node.left) | free_params(node.right)
    if isinstance(node, Call):
        out = set()
        for a in node.args:
            out |= free_params(a)
        return out
    return set()


def _contains_var(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _contains_var(node.child)
    if isinstance(node, BinOp):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, Call):
        return any(_contains_var(a) for a in node.args)
    return False


def _eval(node, t, params, probe):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Pi):
        return np.pi
    if isinstance(node, Var):
        return t
    if isinstance(node, Param):
        try:
            return params[node.name]
        except KeyError:
            raise UnboundParameter([node.name]) from None
    if isinstance(node, Neg):
        return -_eval(node.child, t, params, probe)
    if isinstance(node, BinOp):
        a = _eval(node.left, t, params, probe)
        b = _eval(node.right, t, params, probe)
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return np.divide(a, b)
        # '^': integer constant exponents use the power rule semantics
        # (valid for negative bases); anything else is IEEE pow.
        if isinstance(node.right, Num) and node.right.value == int(node.right.value):
            return np.power(a, int(node.right.value))
        return np.power(a, b)
    if isinstance(node, Call):
        name = node.name
        if name == "sign":
            u = _eval(node.args[0], probe, params, probe)
            return np.where(np.greater_equal(u, 0.0), 1.0, -1.0)
        if name in ("selmin", "selmax"):
            u = _eval(node.args[0], probe, params, probe)
            v = _eval(node.args[1], probe, params, probe)
            a = _eval(node.args[2], t, params, probe)
            b = _eval(node.args[3], t, params, probe)
            cond = np.less_equal(u, v) if name == "selmin" else np.greater_equal(u, v)
            return np.where(cond, a, b)
        u = _eval(node.args[0], t, params, probe)
        if name == "sin":
            return np.sin(u)
        if name == "cos":
            return np.cos(u)
        if name == "abs":
            return np.abs(u)
        if name == "sqrt":
            return np.sqrt(u)
        if name == "exp":
            return np.exp(u)
        if name == "log":
            return np.log(u)
        if name == "min":
            return np.minimum(u, _eval(node.args[1], t, params, probe))
        if name == "max":
            return np.maximum(u, _eval(node.args[1], t, params, probe))
    raise TypeError(f"not an Expr: {node!r}")


def evaluate(node, t, params=None, probe=None):
    """Evaluate the expression at t (scalar or ndarray).

    ``probe``, when given, replaces t inside sign() and in the branch
    conditions of selmin/selmax; this is how one-sided derivative limits
    at corner points are taken without leaving the corner.

    Raises DomainError if the final value is non-finite, UnboundParameter
    if a referenced parameter is missing from ``params``.
    """
    params = params or {}
    missing = free_params(node) - set(params)
    if missing:
        raise UnboundParameter(missing)
    t = np.asarray(t, dtype=float)
    if probe is None:
        probe = t
    else:
        probe = np.asarray(probe, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _eval(node, t, params, probe)
    out = np.broadcast_to(np.asarray(out, dtype=float), t.shape)
    bad = ~np.isfinite(out)
    if bad.any():
        t_bad = t[bad] if t.ndim else t
        raise DomainError("expression is non-finite",
                          t=float(np.atleast_1d(t_bad)[0]))
    if t.ndim == 0:
        return float(out)
    return np.array(out, dtype=float)


# --- constant folding ------------------------------------------------

def _is_const(node):
    return isinstance(node, Num)


def _flatten_mul(node, factors):
    """Collect multiplicative factors, pulling Neg out as a factor of -1."""
    if isinstance(node, BinOp) and node.op == "*":
        _flatten_mul(node.left, factors)
        _flatten_mul(node.right, factors)
    elif isinstance(node, Neg):
        factors.append(Num(-1.0))
        _flatten_mul(node.child, factors)
    else:
        factors.append(node)


def fold(node):
    """Constant folding: literal arithmetic, dropped zero/one factors, and
    merged numeric coefficients in products. No other simplification."""
    if isinstance(node, Neg):
        child = fold(node.child)
        if isinstance(child, Num):
            return Num(-child.value)
        if isinstance(child, Neg):
            return child.child
        return Neg(child)
    if isinstance(node, Call):
        return Call(node.name, tuple(fold(a) for a in node.args))
    if not isinstance(node, BinOp):
        return node
    left, right = fold(node.left), fold(node.right)
    op = node.op
    if _is_const(left) and _is_const(right):
        a, b = left.value, right.value
        try:
            with np.errstate(divide="raise", invalid="raise", over="raise"):
                if op == "+":
                    return Num(a + b)
                if op == "-":
                    return Num(a - b)
                if op == "*":
                    return Num(a * b)
                if op == "/":
                    return Num(a / b)
                if op == "^":
                    v = float(np.power(a, int(b) if b == int(b) else b))
                    if np.isfinite(v):
                        return Num(v)
        except FloatingPointError:
            pass
        return BinOp(op, left, right)
    if op == "+":
        if _is_const(left) and left.value == 0:
            return right
        if _is_const(right) and right.value == 0:
            return left
        return BinOp(op, left, right)
    if op == "-":
        if _is_const(right) and right.value == 0:
            return left
        if _is_const(left) and left.value == 0:
            return fold(Neg(right))
        return BinOp(op, left, right)
    if op == "*":
        factors = []
        _flatten_mul(BinOp("*", left, right), factors)
        coeff = 1.0
        rest = []
        for f in factors:
            if _is_const(f):
                coeff *= f.value
            else:
                rest.append(f)
        if coeff == 0.0:
            return Num(0.0)
        if not rest:
            return Num(coeff)
        chain = rest[0]
        for f in rest[1:]:
            chain = BinOp("*", chain, f)
        if coeff == 1.0:
            return chain
        if coeff == -1.0:
            return Neg(chain)
        return BinOp("*", Num(coeff), chain)
    if op == "/":
        if _is_const(left) and left.value == 0:
            return Num(0.0)
        if _is_const(right) and right.value == 1:
            return left
        return BinOp(op, left, right)
    if op == "^":
        if _is_const(right):
            if right.value == 1:
                return left
            if right.value == 0:
                return Num(1.0)
        return BinOp(op, left, right)
    return BinOp(op, left, right)


# --- differentiation -------------------------------------------------

def _d(node):
    if isinstance(node, (Num, Pi, Param)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return Neg(_d(node.child))
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        du, dv = _d(u), _d(v)
        op = node.op
        if op == "+":
            return BinOp("+", du, dv)
        if op == "-":
            return BinOp("-", du, dv)
        if op == "*":
            return BinOp("+", BinOp("*", du, v), BinOp("*", u, dv))
        if op == "/":
            return BinOp("/",
                         BinOp("-", BinOp("*", du, v), BinOp("*", u, dv)),
                         BinOp("^", v, Num(2.0)))
        # u^v: when v does not involve t the power rule applies (non-integer
        # exponents then fail on negative bases at evaluation time, which is
        # the documented DomainError behaviour); otherwise exp/log rewrite.
        if not _contains_var(v):
            return BinOp("*",
                         BinOp("*", v, BinOp("^", u, fold(BinOp("-", v, Num(1.0))))),
                         du)
        return BinOp("*",
                     BinOp("^", u, v),
                     BinOp("+",
                           BinOp("*", dv, Call("log", (u,))),
                           BinOp("/", BinOp("*", v, du), u)))
    if isinstance(node, Call):
        name = node.name
        if name in ("min", "max"):
            u, v = node.args
            sel = "selmin" if name == "min" else "selmax"
            return Call(sel, (u, v, _d(u), _d(v)))
        if name in ("selmin", "selmax"):
            u, v, a, b = node.args
            return Call(name, (u, v, _d(a), _d(b)))
        u = node.args[0]
        du = _d(u)
        if name == "sin":
            return BinOp("*", Call("cos", (u,)), du)
        if name == "cos":
            return BinOp("*", Neg(Call("sin", (u,))), du)
        if name == "sqrt":
            return BinOp("/", du, BinOp("*", Num(2.0), Call("sqrt", (u,))))
        if name == "exp":
            return BinOp("*", Call("exp", (u,)), du)
        if name == "log":
            return BinOp("/", du, u)
        if name == "abs":
            # sign(0) = +1; the left-limit convention at actual kinks is
            # enforced by the curve layer via probe evaluation.
            return BinOp("*", Call("sign", (u,)), du)
        if name == "sign":
            return Num(0.0)
    raise TypeError(f"not an Expr: {node!r}")


def diff(node):
    """Symbolic derivative with respect to t, constant-folded.

    abs'(u) = sign(u) u'; min/max differentiate to the branch active at
    evaluation time (emitted as selmin/selmax nodes).
    """
    return fold(_d(node))
