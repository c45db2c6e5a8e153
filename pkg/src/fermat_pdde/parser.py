"""Text grammar for expressions and opaque-symbol declarations.

Precedence from loosest to tightest::

    sum     := term (('+' | '-') term)*
    term    := unary (('*' unary) | juxtaposed)*
    unary   := '-' unary | power
    power   := atom ('^' INT)?
    atom    := INT | INT '/' INT | DECIMAL | 'i' | 'pi' | zK | symbol
             | ('sin' | 'cos' | 'exp') '(' sum ')' | '(' sum ')'

Juxtaposition is only accepted right after a numeric literal (``2z1``,
``2pi``, ``3(z1 + 1)``).  Decimal literals such as ``0.5`` or ``1e-3`` are
accepted and become inexact scalars; they are what the printer emits for
inexact constants.

Declarations, one rule per line::

    symbol g1 depends [z2,z3] shift (0,2pi,2pi) adds 0
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InadmissibleArgument, OutOfRangeVariable, ParseError, SourceSpan
from .expr import (
    Add,
    Const,
    Cos,
    Exp,
    Expr,
    IntPow,
    Mul,
    OpaqueSymbol,
    Sin,
    Symbol,
    SymbolRegistry,
    Var,
    add,
    check_argument,
    cos,
    exp,
    mul,
    neg,
    power,
    sin,
)
from .scalar import I, ONE, PI, Scalar, format_scalar, scalar_monomials

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^/(),\[\]])
    """,
    re.VERBOSE,
)

FUNCTIONS = {"sin": sin, "cos": cos, "exp": exp}


@dataclass(frozen=True)
class Token:
    kind: str  # INT, RAT, DEC, IDENT, OP, EOF
    text: str
    start: int
    end: int
    value: object = None

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


def tokenize(text: str) -> list[Token]:
    raw: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(pos, pos + 1))
        kind = m.lastgroup
        if kind == "num":
            s = m.group()
            if any(ch in s for ch in ".eE"):
                raw.append(Token("DEC", s, m.start(), m.end(), float(s)))
            else:
                raw.append(Token("INT", s, m.start(), m.end(), int(s)))
        elif kind == "ident":
            raw.append(Token("IDENT", m.group(), m.start(), m.end()))
        elif kind == "op":
            raw.append(Token("OP", m.group(), m.start(), m.end()))
        pos = m.end()
    raw.append(Token("EOF", "", len(text), len(text)))

    # fold INT '/' INT into a rational literal; any other '/' is an error
    out: list[Token] = []
    k = 0
    while k < len(raw):
        t = raw[k]
        if t.kind == "OP" and t.text == "/":
            raise ParseError(
                "division is only allowed between two integer literals", t.span, {"integer literal"}
            )
        if t.kind == "INT" and raw[k + 1].kind == "OP" and raw[k + 1].text == "/":
            den = raw[k + 2]
            if den.kind != "INT":
                raise ParseError(
                    "division is only allowed between two integer literals",
                    SourceSpan(raw[k + 1].start, den.end),
                    {"integer literal"},
                )
            if den.value == 0:
                raise ParseError("zero denominator", SourceSpan(t.start, den.end))
            out.append(Token("RAT", text[t.start:den.end], t.start, den.end, Fraction(t.value, den.value)))
            k += 3
            continue
        out.append(t)
        k += 1
    return out


class _Parser:
    def __init__(self, text: str, m: int, symbols: SymbolRegistry | None):
        if m < 1:
            raise ValueError("dimension must be >= 1")
        self.text = text
        self.m = m
        self.symbols = symbols
        self.toks = tokenize(text)
        self.k = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def advance(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def at_ident(self, text: str) -> bool:
        return self.tok.kind == "IDENT" and self.tok.text == text

    def error(self, msg: str, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        return ParseError(f"{msg}, found {what}", SourceSpan(t.start, max(t.end, t.start)), expected)

    def expect_op(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}", {text})
        return self.advance()

    def expect_ident(self, text: str | None = None) -> Token:
        if self.tok.kind != "IDENT" or (text is not None and self.tok.text != text):
            raise self.error(f"expected {text or 'identifier'}", {text or "identifier"})
        return self.advance()

    def expect_eof(self) -> None:
        if self.tok.kind != "EOF":
            raise self.error("unexpected trailing input", {"+", "-", "*", "end of input"})

    # -- grammar -------------------------------------------------------------

    _ATOM_START = {"integer", "rational", "decimal", "i", "pi", "variable", "symbol", "sin", "cos", "exp", "(", "-"}

    def parse_sum(self) -> tuple[Expr, int]:
        start = self.tok.start
        items = [self.parse_term()]
        while self.at("+") or self.at("-"):
            op = self.advance().text
            t = self.parse_term()
            items.append(t if op == "+" else neg(t))
        return add(*items), start

    def parse_term(self) -> Expr:
        factors = [self.parse_unary()]
        while True:
            if self.at("*"):
                self.advance()
                factors.append(self.parse_unary())
            elif self._juxtaposable():
                factors.append(self.parse_power())
            else:
                break
        return mul(*factors)

    def _juxtaposable(self) -> bool:
        prev = self.toks[self.k - 1] if self.k else None
        if prev is None or prev.kind not in ("INT", "RAT", "DEC"):
            return False
        # a literal directly followed by an identifier or '('; the literal must not be an exponent
        before = self.toks[self.k - 2] if self.k >= 2 else None
        if before is not None and before.kind == "OP" and before.text == "^":
            return False
        return self.tok.kind == "IDENT" or self.at("(")

    def parse_unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return neg(self.parse_unary())
        if self.at("+"):
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        if self.at("^"):
            self.advance()
            t = self.tok
            if t.kind != "INT":
                raise self.error("exponent must be a non-negative integer literal", {"integer literal"})
            self.advance()
            return power(base, t.value)
        return base

    def parse_atom(self) -> Expr:
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return Const(Scalar(t.value))
        if t.kind == "RAT":
            self.advance()
            return Const(Scalar(t.value))
        if t.kind == "DEC":
            self.advance()
            return Const(Scalar.inexact(t.value))
        if self.at("("):
            self.advance()
            inner, _ = self.parse_sum()
            self.expect_op(")")
            return inner
        if t.kind == "IDENT":
            name = t.text
            if name == "i":
                self.advance()
                return Const(I)
            if name == "pi":
                self.advance()
                return Const(PI)
            if name in FUNCTIONS:
                self.advance()
                self.expect_op("(")
                arg, _ = self.parse_sum()
                close = self.expect_op(")")
                try:
                    return FUNCTIONS[name](arg)
                except InadmissibleArgument as exc:
                    raise InadmissibleArgument(exc.message, SourceSpan(t.start, close.end)) from None
            if re.fullmatch(r"z\d+", name):
                self.advance()
                idx = int(name[1:])
                if not 1 <= idx <= self.m:
                    raise OutOfRangeVariable(
                        f"variable {name} is outside z1..z{self.m}", t.span
                    )
                return Var(idx)
            if self.symbols is not None and name in self.symbols:
                self.advance()
                return Symbol(self.symbols[name])
            raise ParseError(f"unknown identifier {name!r}", t.span, self._ATOM_START)
        raise self.error("expected an expression", self._ATOM_START)


def parse_expr(text: str, m: int, symbols: SymbolRegistry | None = None) -> Expr:
    """Parse an expression in dimension ``m`` with optional declared symbols."""
    p = _Parser(text, m, symbols)
    e, _ = p.parse_sum()
    p.expect_eof()
    return e


def parse_constant(text: str, m: int = 1) -> Scalar:
    """Parse a constant expression such as ``2pi`` or ``(1/2)*pi*i``."""
    e = parse_expr(text, m)
    if not isinstance(e, Const):
        raise ParseError("expected a constant", SourceSpan(0, len(text)), {"constant"})
    return e.value


# ---------------------------------------------------------------------------
# declarations


def _parse_decl_line(line: str, offset: int, m: int, registry: SymbolRegistry) -> None:
    p = _Parser(line, m, None)
    try:
        p.expect_ident("symbol")
        name_tok = p.expect_ident()
        p.expect_ident("depends")
        p.expect_op("[")
        deps = []
        while True:
            v = p.expect_ident()
            if not re.fullmatch(r"z\d+", v.text):
                raise ParseError("expected a variable", v.span, {"variable"})
            idx = int(v.text[1:])
            if not 1 <= idx <= m:
                raise OutOfRangeVariable(f"variable {v.text} is outside z1..z{m}", v.span)
            deps.append(idx)
            if p.at(","):
                p.advance()
                continue
            p.expect_op("]")
            break
        try:
            sym = registry.declare(name_tok.text, deps)
        except ValueError as exc:
            raise ParseError(str(exc), name_tok.span) from None
        if p.tok.kind == "EOF":
            return
        p.expect_ident("shift")
        p.expect_op("(")
        shift = []
        while True:
            shift.append(_constant_arg(p))
            if p.at(","):
                p.advance()
                continue
            p.expect_op(")")
            break
        if len(shift) != m:
            raise ParseError(f"shift vector needs {m} components, got {len(shift)}", SourceSpan(0, p.tok.start))
        p.expect_ident("adds")
        adds = _constant_arg(p)
        p.expect_eof()
        sym.add_rule(shift, adds)
    except (ParseError, OutOfRangeVariable, InadmissibleArgument) as exc:
        span = exc.span
        if span is not None:
            exc.span = SourceSpan(span.start + offset, span.end + offset)
        raise


def _constant_arg(p: _Parser) -> Scalar:
    start = p.tok.start
    e, _ = p.parse_sum()
    if not isinstance(e, Const):
        raise ParseError("expected a constant", SourceSpan(start, p.tok.start), {"constant"})
    return e.value


def parse_declarations(text: str, m: int, registry: SymbolRegistry | None = None) -> SymbolRegistry:
    """Parse symbol declaration lines (blank lines and ``#`` comments skipped)."""
    registry = registry if registry is not None else SymbolRegistry(m)
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            _parse_decl_line(body.rstrip("\r\n"), offset, m, registry)
        offset += len(line)
    return registry


def format_declarations(registry: SymbolRegistry) -> list[str]:
    """Declaration lines that rebuild ``registry`` through :func:`parse_declarations`."""
    lines = []
    for sym in registry:
        deps = ",".join(f"z{j}" for j in sorted(sym.depends_on))
        head = f"symbol {sym.name} depends [{deps}]"
        if not sym.rules:
            lines.append(head)
        for d, s in sym.rules:
            full = ["0"] * registry.m
            for j, x in zip(sorted(sym.depends_on), d):
                full[j - 1] = format_scalar(x)
            lines.append(f"{head} shift ({','.join(full)}) adds {format_scalar(s)}")
    return lines


# ---------------------------------------------------------------------------
# printer


def _const_text(c: Scalar, standalone: bool) -> str:
    s = format_scalar(c)
    if standalone:
        return s
    if c.is_exact and len(scalar_monomials(c)) == 1:
        return s
    return f"({s})"


def _is_atomic(e: Expr) -> bool:
    return isinstance(e, (Var, Symbol, Exp, Sin, Cos))


def _factor_text(e: Expr) -> str:
    if isinstance(e, Add):
        return f"({print_expr(e)})"
    if isinstance(e, Const):
        return _const_text(e.value, False)
    return print_expr(e)


def print_expr(e: Expr) -> str:
    """Canonical text for ``e``; reparses to a structurally equal tree."""
    if isinstance(e, Const):
        return _const_text(e.value, True)
    if isinstance(e, Var):
        return f"z{e.index}"
    if isinstance(e, Symbol):
        return e.symbol.name
    if isinstance(e, Sin):
        return f"sin({print_expr(e.arg)})"
    if isinstance(e, Cos):
        return f"cos({print_expr(e.arg)})"
    if isinstance(e, Exp):
        return f"exp({print_expr(e.arg)})"
    if isinstance(e, IntPow):
        b = print_expr(e.base) if _is_atomic(e.base) else f"({print_expr(e.base)})"
        return f"{b}^{e.exponent}"
    if isinstance(e, Mul):
        ch = list(e.children)
        prefix = ""
        if isinstance(ch[0], Const):
            c = ch[0].value
            if c == -ONE:
                prefix = "-"
                ch = ch[1:]
        parts = [_factor_text(x) for x in ch]
        return prefix + "*".join(parts)
    if isinstance(e, Add):
        parts = [print_expr(x) for x in e.children]
        text = parts[0]
        for t in parts[1:]:
            text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return text
    raise TypeError(f"cannot print {e!r}")
