"""Expression grammar: parsing, tree-shape checking, and probabilistic
interpretation of terms as densities under the rounding-error model.

Terms are  r | x | t op t  with op in {+, -, *, /}.  Each machine operation
multiplies the infinite-precision result Z by (1 + u*E), where E is the
rounding-error distribution derived from Z's own density and the two factors
are treated as independent.  Program statements (skip, :=, ;, if-then-else)
and tests parse but have no implemented semantics.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Union

from .density import Density, DistributionSpec, build
from .errordist import (
    ErrorDistribution,
    exact_error_density,
    typical_density,
    typical_density_finite_p,
)
from .errors import (
    RoundDistError,
    TermShapeError,
    UnboundVariableError,
    UnsupportedSemanticsError,
)
from .minifloat import FloatFormat, round_nearest

__all__ = [
    "Term",
    "Literal",
    "Var",
    "BinOp",
    "ProgramAst",
    "ProbContext",
    "ParseError",
    "parse",
    "parse_term",
    "parse_program",
    "variables",
    "check_tree",
    "quantize",
    "interpret_term",
]

ERROR_MODES = ("exact", "typical", "typical_finite_p", "none")


class ParseError(RoundDistError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Term"
    right: "Term"


Term = Union[Literal, Var, BinOp]


@dataclass(frozen=True)
class Test:
    op: str  # < > ==
    term: Term
    bound: float


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    name: str
    term: Term


@dataclass(frozen=True)
class Seq:
    first: "Statement"
    second: "Statement"


@dataclass(frozen=True)
class If:
    test: Test
    then: "Statement"
    orelse: "Statement"


Statement = Union[Skip, Assign, Seq, If]
ProgramAst = Statement


def variables(term: Term) -> frozenset[str]:
    if isinstance(term, Literal):
        return frozenset()
    if isinstance(term, Var):
        return frozenset([term.name])
    return variables(term.left) | variables(term.right)


def _var_counts(term: Term, counts: dict[str, int]) -> None:
    if isinstance(term, Var):
        counts[term.name] = counts.get(term.name, 0) + 1
    elif isinstance(term, BinOp):
        _var_counts(term.left, counts)
        _var_counts(term.right, counts)


def check_tree(term: Term) -> None:
    """Raise TermShapeError if any variable occurs more than once."""
    counts: dict[str, int] = {}
    _var_counts(term, counts)
    for name, n in counts.items():
        if n > 1:
            raise TermShapeError(
                f"variable {name!r} occurs {n} times; repeated variables make "
                "sub-results correlated, which this analysis cannot represent"
            )


def pretty(node) -> str:
    if isinstance(node, Literal):
        return repr(node.value) if node.value != int(node.value) else str(int(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, Test):
        return f"{pretty(node.term)} {node.op} {node.bound:g}"
    if isinstance(node, Skip):
        return "skip"
    if isinstance(node, Assign):
        return f"{node.name} := {pretty(node.term)}"
    if isinstance(node, Seq):
        return f"{pretty(node.first)}; {pretty(node.second)}"
    if isinstance(node, If):
        return f"if {pretty(node.test)} then {pretty(node.then)} else {pretty(node.orelse)}"
    raise TypeError(type(node))


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<num>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>:=|==|[-+*/();<>])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"skip", "if", "then", "else"}


@dataclass
class _Token:
    kind: str  # num | name | op | kw | eof
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        text = m.group()
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", line, col)
        if kind != "ws":
            if kind == "name" and text in _KEYWORDS:
                kind = "kw"
            tokens.append(_Token(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def _expect(self, text: str) -> _Token:
        tok = self.cur
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return self._advance()

    def _fail(self, msg: str):
        tok = self.cur
        raise ParseError(f"{msg}, found {tok.text or 'end of input'!r}", tok.line, tok.col)

    # terms ---------------------------------------------------------------

    def term(self) -> Term:
        node = self.factor_chain()
        while self.cur.text in ("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self.factor_chain())
        return node

    def factor_chain(self) -> Term:
        node = self.atom()
        while self.cur.text in ("*", "/"):
            op = self._advance().text
            node = BinOp(op, node, self.atom())
        return node

    def atom(self) -> Term:
        tok = self.cur
        if tok.text == "(":
            self._advance()
            node = self.term()
            self._expect(")")
            return node
        if tok.text == "-":
            self._advance()
            inner = self.atom()
            if isinstance(inner, Literal):
                return Literal(-inner.value)
            return BinOp("-", Literal(0.0), inner)
        if tok.kind == "num":
            self._advance()
            return Literal(float(tok.text))
        if tok.kind == "name":
            self._advance()
            return Var(tok.text)
        self._fail("expected a term")

    # programs ------------------------------------------------------------

    def program(self) -> Statement:
        node = self.statement()
        while self.cur.text == ";":
            self._advance()
            node = Seq(node, self.statement())
        return node

    def statement(self) -> Statement:
        tok = self.cur
        if tok.text == "skip":
            self._advance()
            return Skip()
        if tok.text == "if":
            self._advance()
            test = self.test()
            self._expect("then")
            then = self.statement()
            self._expect("else")
            orelse = self.statement()
            return If(test, then, orelse)
        if tok.text == "(":
            self._advance()
            node = self.program()
            self._expect(")")
            return node
        if tok.kind == "name" and self.tokens[self.pos + 1].text == ":=":
            name = self._advance().text
            self._advance()
            return Assign(name, self.term())
        self._fail("expected a statement")

    def test(self) -> Test:
        t = self.term()
        tok = self.cur
        if tok.text not in ("<", ">", "=="):
            self._fail("expected a comparison (<, >, ==)")
        self._advance()
        bound = self.atom()
        if not isinstance(bound, Literal):
            raise ParseError("comparison bound must be a literal", tok.line, tok.col)
        return Test(tok.text, t, bound.value)


def parse_term(source: str) -> Term:
    p = _Parser(source)
    node = p.term()
    if p.cur.kind != "eof":
        p._fail("trailing input after term")
    return node


def parse_program(source: str) -> Statement:
    p = _Parser(source)
    node = p.program()
    if p.cur.kind != "eof":
        p._fail("trailing input after program")
    return node


def parse(source: str):
    """Parse a term, or a program if statement syntax is present."""
    toks = _tokenize(source)
    if any(t.kind == "kw" or t.text in (":=", ";") for t in toks):
        return parse_program(source)
    return parse_term(source)


# ---------------------------------------------------------------------------
# probabilistic interpretation

@dataclass
class ProbContext:
    """Independent marginal densities for term variables, plus model options."""

    bindings: dict[str, Density] = field(default_factory=dict)
    error_mode: str = "typical"
    quantize_inputs: bool = False
    # forwarded to density binary operations (rel_tol, piece_cap, break_cap,
    # degree); analyses that only need quantiles can trade accuracy for speed
    op_options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.error_mode not in ERROR_MODES:
            raise ValueError(f"error_mode must be one of {ERROR_MODES}, got {self.error_mode!r}")

    @classmethod
    def from_specs(cls, specs: dict[str, DistributionSpec], **kw) -> "ProbContext":
        return cls(bindings={name: build(s) for name, s in specs.items()}, **kw)


_TYPICAL_CACHE: ErrorDistribution | None = None
_FINITE_P_CACHE: dict[FloatFormat, ErrorDistribution] = {}


def error_distribution_for(d: Density, fmt: FloatFormat, mode: str) -> ErrorDistribution:
    global _TYPICAL_CACHE
    if mode == "exact":
        return exact_error_density(d, fmt)
    if mode == "typical":
        if _TYPICAL_CACHE is None:
            _TYPICAL_CACHE = typical_density()
        return _TYPICAL_CACHE
    if mode == "typical_finite_p":
        if fmt not in _FINITE_P_CACHE:
            _FINITE_P_CACHE[fmt] = typical_density_finite_p(fmt)
        return _FINITE_P_CACHE[fmt]
    raise ValueError(f"no error distribution for mode {mode!r}")


def _error_factor(d: Density, fmt: FloatFormat, mode: str) -> Density:
    """Density of 1 + u*E where E is the rounding-error variable for d."""
    e = error_distribution_for(d, fmt, mode)
    return e.density.scalar_mul(fmt.u).scalar_add(1.0)


def quantize(ctx: ProbContext, fmt: FloatFormat) -> ProbContext:
    """Model initial input quantization: each X becomes X * (1 + u*E(X))."""
    if ctx.error_mode == "none":
        return ctx
    new = {
        name: d.mul(_error_factor(d, fmt, ctx.error_mode), **ctx.op_options)
        for name, d in ctx.bindings.items()
    }
    return ProbContext(
        bindings=new,
        error_mode=ctx.error_mode,
        quantize_inputs=ctx.quantize_inputs,
        op_options=ctx.op_options,
    )


def _apply_scalar(op: str, c: float, d: Density, const_left: bool) -> Density:
    if op == "+":
        return d.scalar_add(c)
    if op == "-":
        return d.scalar_mul(-1.0).scalar_add(c) if const_left else d.scalar_add(-c)
    if op == "*":
        return d.scalar_mul(c)
    # division
    if const_left:
        return _reciprocal_scale(c, d)
    return d.scalar_mul(1.0 / c)


def _reciprocal_scale(c: float, d: Density) -> Density:
    """Density of c / X, requiring X's support to be sign-definite."""
    from .density import adaptive_from_callable
    from .errors import SingularDivisionError
    import numpy as np

    a, b = d.support
    if a <= 0.0 <= b:
        raise SingularDivisionError(
            f"cannot form {c:g}/X: divisor support [{a:g}, {b:g}] touches zero"
        )
    img = sorted(c / np.asarray(d.breaks))

    def fn(ts):
        ts = np.asarray(ts, dtype=float)
        out = np.zeros_like(ts)
        nz = ts != 0.0
        out[nz] = d.pdf(c / ts[nz]) * abs(c) / (ts[nz] ** 2)
        return out

    return adaptive_from_callable(fn, img).normalize()


def interpret_term(
    term: Term, ctx: ProbContext, fmt: FloatFormat, *, track_overflow: bool = False
):
    """Evaluate a tree-shaped term to the density of its rounded result.

    With ``track_overflow`` the return value is ``(density, overflow_mass)``
    where the second component accumulates, over every rounding step, the
    probability that the exact pre-rounding result lies at or beyond the
    format's overflow boundary.
    """
    check_tree(term)
    work = quantize(ctx, fmt) if ctx.quantize_inputs else ctx
    acc = {"overflow": 0.0}
    if ctx.quantize_inputs and ctx.error_mode != "none":
        bound = fmt.overflow_boundary
        for name in variables(term):
            if name in ctx.bindings:
                acc["overflow"] += float(ctx.bindings[name].mass_outside(-bound, bound))
    result = _interp(term, work, fmt, acc)
    if isinstance(result, float):
        warnings.warn("term is a constant; returning a degenerate density")
        result = build(DistributionSpec.constant(result))
    if track_overflow:
        return result, acc["overflow"]
    return result


def _interp(term: Term, ctx: ProbContext, fmt: FloatFormat, acc: dict):
    if isinstance(term, Literal):
        return float(term.value)
    if isinstance(term, Var):
        if term.name not in ctx.bindings:
            raise UnboundVariableError(f"variable {term.name!r} is not bound in the context")
        return ctx.bindings[term.name]
    left = _interp(term.left, ctx, fmt, acc)
    right = _interp(term.right, ctx, fmt, acc)
    if isinstance(left, float) and isinstance(right, float):
        # constant folding in infinite precision; no rounding applied
        folded = {"+": left + right, "-": left - right, "*": left * right, "/": left / right}[term.op]
        if round_nearest(folded, fmt).value != folded:
            warnings.warn(
                f"constant subterm {pretty(term)} = {folded!r} is not exactly representable"
            )
        return folded
    if isinstance(left, float):
        z = _apply_scalar(term.op, left, right, const_left=True)
    elif isinstance(right, float):
        z = _apply_scalar(term.op, right, left, const_left=False)
    else:
        z = {"+": left.add, "-": left.sub, "*": left.mul, "/": left.div}[term.op](
            right, **ctx.op_options
        )
    if ctx.error_mode == "none":
        return z
    bound = fmt.overflow_boundary
    acc["overflow"] += float(z.mass_outside(-bound, bound))
    return z.mul(_error_factor(z, fmt, ctx.error_mode), **ctx.op_options).normalize()


def interpret_program(prog: Statement, ctx: ProbContext, fmt: FloatFormat):
    raise UnsupportedSemanticsError(
        "program statements parse but their semantics are not implemented; "
        "only tree-shaped terms are supported"
    )
