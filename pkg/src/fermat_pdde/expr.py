"""Immutable expression trees over C^m.

Nodes are frozen dataclasses compared and hashed structurally.  Build them
with the smart constructors (:func:`add`, :func:`mul`, :func:`power`,
:func:`exp`, :func:`sin`, :func:`cos`) or the operator overloads, which
flatten nested sums/products and fold constants so that structurally equal
inputs give structurally equal trees.

Transcendental nodes only accept an argument that is a polynomial in the
``z`` variables plus a constant-coefficient linear combination of opaque
symbols; everything else is rejected with :class:`InadmissibleArgument`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    InadmissibleArgument,
    InconsistentShiftRule,
    MissingSymbol,
    UnknownSymbolShift,
)
from .poly import Poly, svar, zvar
from .scalar import ONE, ZERO, Scalar, ScalarLike

RESERVED_NAMES = frozenset({"i", "pi", "sin", "cos", "exp", "symbol", "depends", "shift", "adds"})


# ---------------------------------------------------------------------------
# opaque symbols


class OpaqueSymbol:
    """An uninterpreted entire function of some of ``z2..zm``.

    The only structure it carries is a set of additive shift rules
    ``g(z + d) = g(z) + s``.  Rules are registered during setup; the
    closure under integer combinations is answered by :meth:`shift_constant`.
    Identity (equality, hashing, ordering) is by name.
    """

    def __init__(self, name: str, depends_on: Iterable[int]):
        deps = frozenset(int(j) for j in depends_on)
        if 1 in deps:
            raise ValueError(f"opaque symbol {name!r} may not depend on z1")
        if any(j < 1 for j in deps):
            raise ValueError("variable indices start at 1")
        if not name.isidentifier() or name in RESERVED_NAMES or _is_zvar_name(name):
            raise ValueError(f"invalid symbol name {name!r}")
        self.name = name
        self.depends_on = deps
        self._order = tuple(sorted(deps))
        self._rules: list[tuple[tuple[Scalar, ...], Scalar]] = []

    @property
    def rules(self) -> tuple[tuple[tuple[Scalar, ...], Scalar], ...]:
        """Registered generator rules as (restricted shift, additive constant)."""
        return tuple(self._rules)

    def restrict(self, shift: Sequence[ScalarLike]) -> tuple[Scalar, ...]:
        """Components of a full-length shift on the variables this symbol reads."""
        return tuple(Scalar.of(shift[j - 1]) if j - 1 < len(shift) else ZERO for j in self._order)

    def add_rule(self, shift: Sequence[ScalarLike], adds: ScalarLike) -> None:
        """Register ``g(z + shift) = g(z) + adds``; ``shift`` has full length m."""
        d = self.restrict(shift)
        adds = Scalar.of(adds)
        if all(x.is_zero() for x in d):
            if not adds.is_zero(1e-12):
                raise InconsistentShiftRule(f"{self.name}: zero shift must add 0")
            return
        k = _integer_combination([r for r, _ in self._rules], d)
        if k is None:
            if _rational_combination([r for r, _ in self._rules], d) is not None:
                raise InconsistentShiftRule(
                    f"{self.name}: shift {_fmt_vec(d)} is a non-integer combination of existing rules"
                )
            self._rules.append((d, adds))
            return
        implied = _combine(k, [s for _, s in self._rules])
        if not _same(implied, adds):
            raise InconsistentShiftRule(
                f"{self.name}: rules imply adds {implied} for shift {_fmt_vec(d)}, got {adds}"
            )

    def shift_constant(self, shift: Sequence[ScalarLike]) -> Scalar:
        """Constant ``s`` with ``g(z + shift) = g(z) + s``, or raise UnknownSymbolShift."""
        d = self.restrict(shift)
        if all(x.is_zero() for x in d):
            return ZERO
        k = _integer_combination([r for r, _ in self._rules], d)
        if k is None:
            raise UnknownSymbolShift(self.name, _fmt_vec(d))
        return _combine(k, [s for _, s in self._rules])

    def can_shift(self, shift: Sequence[ScalarLike]) -> bool:
        try:
            self.shift_constant(shift)
        except UnknownSymbolShift:
            return False
        return True

    def __eq__(self, other: object) -> bool:
        if isinstance(other, OpaqueSymbol):
            return self.name == other.name and self.depends_on == other.depends_on
        return NotImplemented

    def __lt__(self, other: OpaqueSymbol) -> bool:
        return self.name < other.name

    def __hash__(self) -> int:
        return hash((self.name, self.depends_on))

    def __repr__(self) -> str:
        deps = ",".join(f"z{j}" for j in self._order)
        return f"OpaqueSymbol({self.name}; [{deps}]; {len(self._rules)} rules)"


def _is_zvar_name(name: str) -> bool:
    return len(name) > 1 and name[0] == "z" and name[1:].isdigit()


def _fmt_vec(d) -> str:
    return "(" + ", ".join(str(x) for x in d) + ")"


def _same(a: Scalar, b: Scalar) -> bool:
    if a.is_exact and b.is_exact:
        return a == b
    return a.close_to(b, 1e-10)


def _combine(k: Sequence[int], values: Sequence[Scalar]) -> Scalar:
    total = ZERO
    for ki, v in zip(k, values):
        if ki:
            total = total + v * ki
    return total


def _flatten(vecs: Sequence[Sequence[Scalar]]) -> list[list[Fraction]] | None:
    """Coordinates of exact scalar vectors over Q, or None if any entry is inexact."""
    if any(not x.is_exact for v in vecs for x in v):
        return None
    depth = max((len(x.coeffs) for v in vecs for x in v), default=0)
    out = []
    for v in vecs:
        row = []
        for x in v:
            c = x.coeffs
            for k in range(depth):
                re, im = c[k] if k < len(c) else (Fraction(0), Fraction(0))
                row += [re, im]
        out.append(row)
    return out


def _rational_combination(gens, target):
    """Solve ``sum k_j gens_j = target`` for rational (or float) ``k``; None if unsolvable."""
    if not gens:
        return None
    flat = _flatten(list(gens) + [target])
    if flat is None:
        a = np.array([[complex(x) for x in g] for g in gens]).T
        b = np.array([complex(x) for x in target])
        k, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.max(np.abs(a @ k - b), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(b))):
            return None
        return [complex(x) for x in k]
    cols, rhs = flat[:-1], flat[-1]
    n, rows = len(cols), len(rhs)
    mat = [[cols[j][r] for j in range(n)] + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, rows) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    if any(mat[i][n] != 0 for i in range(r, rows)):
        return None
    k = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        k[c] = mat[i][n]
    return k


def _integer_combination(gens, target):
    k = _rational_combination(gens, target)
    if k is None:
        return None
    out = []
    for x in k:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                return None
            out.append(int(x))
        else:
            n = round(x.real)
            if abs(x - n) > 1e-9:
                return None
            out.append(n)
    return out


class SymbolRegistry:
    """Name -> OpaqueSymbol table for one ambient dimension ``m``."""

    def __init__(self, m: int, symbols: Iterable[OpaqueSymbol] = ()):
        if m < 1:
            raise ValueError("dimension must be >= 1")
        self.m = m
        self._by_name: dict[str, OpaqueSymbol] = {}
        for s in symbols:
            self.add(s)

    def add(self, symbol: OpaqueSymbol) -> OpaqueSymbol:
        if any(j > self.m for j in symbol.depends_on):
            raise ValueError(f"symbol {symbol.name!r} depends on a variable beyond z{self.m}")
        existing = self._by_name.get(symbol.name)
        if existing is not None and existing is not symbol:
            raise ValueError(f"symbol {symbol.name!r} already declared")
        self._by_name[symbol.name] = symbol
        return symbol

    def declare(self, name: str, depends_on: Iterable[int]) -> OpaqueSymbol:
        existing = self._by_name.get(name)
        deps = frozenset(depends_on)
        if existing is not None:
            if existing.depends_on != deps:
                raise ValueError(f"symbol {name!r} redeclared with different variables")
            return existing
        return self.add(OpaqueSymbol(name, deps))

    def __getitem__(self, name: str) -> OpaqueSymbol:
        return self._by_name[name]

    def get(self, name: str) -> OpaqueSymbol | None:
        return self._by_name.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self._by_name.values())

    def __len__(self) -> int:
        return len(self._by_name)


# ---------------------------------------------------------------------------
# expression nodes


class Expr:
    """Base class; see the module docstring."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return power(self, n)

    def __truediv__(self, other):
        other = as_expr(other)
        if not isinstance(other, Const):
            raise TypeError("expressions can only be divided by constants")
        return mul(self, Const(other.value.inverse()))

    def __str__(self) -> str:
        from .parser import print_expr

        return print_expr(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: Scalar


@dataclass(frozen=True, slots=True)
class Var(Expr):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("variable indices start at 1")


@dataclass(frozen=True, slots=True)
class Symbol(Expr):
    symbol: OpaqueSymbol


@dataclass(frozen=True, slots=True)
class Add(Expr):
    children: tuple


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    children: tuple


@dataclass(frozen=True, slots=True)
class IntPow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Cos(Expr):
    arg: Expr


TRANSCENDENTAL = (Exp, Sin, Cos)


# ---------------------------------------------------------------------------
# smart constructors


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, OpaqueSymbol):
        return Symbol(x)
    return Const(Scalar.of(x))


def const(value: ScalarLike) -> Const:
    return Const(Scalar.of(value))


def z(i: int) -> Var:
    return Var(i)


def add(*xs) -> Expr:
    items: list[Expr] = []
    total = ZERO
    for x in map(as_expr, xs):
        for c in x.children if isinstance(x, Add) else (x,):
            if isinstance(c, Const):
                total = total + c.value
            else:
                items.append(c)
    if not total.is_zero():
        items.append(Const(total))
    if not items:
        return Const(ZERO)
    if len(items) == 1:
        return items[0]
    return Add(tuple(items))


def mul(*xs) -> Expr:
    items: list[Expr] = []
    coeff = ONE
    for x in map(as_expr, xs):
        for c in x.children if isinstance(x, Mul) else (x,):
            if isinstance(c, Const):
                coeff = coeff * c.value
            else:
                items.append(c)
    if coeff.is_zero():
        return Const(ZERO)
    if coeff != ONE:
        items.insert(0, Const(coeff))
    if not items:
        return Const(ONE)
    if len(items) == 1:
        return items[0]
    return Mul(tuple(items))


def neg(x) -> Expr:
    return mul(Const(-ONE), x)


def power(base, n: int) -> Expr:
    base = as_expr(base)
    if not isinstance(n, int) or n < 0:
        raise ValueError("powers take non-negative integer exponents")
    if n == 0:
        return Const(ONE)
    if n == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value ** n)
    return IntPow(base, n)


def _checked(kind, arg) -> Expr:
    arg = as_expr(arg)
    check_argument(arg)
    return kind(arg)


def exp(arg) -> Expr:
    return _checked(Exp, arg)


def sin(arg) -> Expr:
    return _checked(Sin, arg)


def cos(arg) -> Expr:
    return _checked(Cos, arg)


def check_argument(arg: Expr, span=None) -> None:
    """Raise InadmissibleArgument unless ``arg`` is polynomial-plus-opaque-linear."""
    if has_transcendental(arg):
        raise InadmissibleArgument("nested transcendental functions are not admissible", span)
    p = to_poly(arg)
    for m in p.terms:
        if any(v[0] == 1 for v, _ in m) and not (len(m) == 1 and m[0][1] == 1):
            raise InadmissibleArgument(
                "opaque symbols may enter a transcendental argument only linearly "
                "with constant coefficients",
                span,
            )


# ---------------------------------------------------------------------------
# traversal helpers


def children(e: Expr) -> tuple:
    if isinstance(e, (Add, Mul)):
        return e.children
    if isinstance(e, IntPow):
        return (e.base,)
    if isinstance(e, TRANSCENDENTAL):
        return (e.arg,)
    return ()


def walk(e: Expr):
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children(node))


def has_transcendental(e: Expr) -> bool:
    return any(isinstance(n, TRANSCENDENTAL) for n in walk(e))


def free_symbols(e: Expr) -> set[OpaqueSymbol]:
    return {n.symbol for n in walk(e) if isinstance(n, Symbol)}


def max_var(e: Expr) -> int:
    return max((n.index for n in walk(e) if isinstance(n, Var)), default=0)


def symbols_in_transcendentals(e: Expr) -> bool:
    return any(isinstance(n, TRANSCENDENTAL) and free_symbols(n.arg) for n in walk(e))


def node_count(e: Expr) -> int:
    return sum(1 for _ in walk(e))


# ---------------------------------------------------------------------------
# polynomial conversion


def to_poly(e: Expr) -> Poly:
    """Expand a transcendental-free expression into a :class:`Poly`."""
    if isinstance(e, Const):
        return Poly.const(e.value)
    if isinstance(e, Var):
        return Poly.var(zvar(e.index))
    if isinstance(e, Symbol):
        return Poly.var(svar(e.symbol))
    if isinstance(e, Add):
        total = Poly()
        for c in e.children:
            total = total + to_poly(c)
        return total
    if isinstance(e, Mul):
        prod = Poly.const(ONE)
        for c in e.children:
            prod = prod * to_poly(c)
        return prod
    if isinstance(e, IntPow):
        return to_poly(e.base) ** e.exponent
    raise ValueError(f"{type(e).__name__} is not polynomial")


def from_poly(p: Poly) -> Expr:
    """Canonical expression for a polynomial (graded order, highest first)."""
    terms = []
    for m, c in p.sorted_terms():
        factors = [Const(c)]
        for v, e in m:
            atom = Var(v[1]) if v[0] == 0 else Symbol(v[1])
            factors.append(power(atom, e))
        terms.append(mul(*factors))
    return add(*terms)


def poly_var_atom(key) -> Expr:
    return Var(key[1]) if key[0] == 0 else Symbol(key[1])


# ---------------------------------------------------------------------------
# numeric evaluation


def _lookup(symbol_values: Mapping, sym: OpaqueSymbol):
    if sym in symbol_values:
        return symbol_values[sym]
    if sym.name in symbol_values:
        return symbol_values[sym.name]
    raise MissingSymbol(sym.name)


def _eval(e: Expr, point, symbol_values):
    if isinstance(e, Const):
        return e.value.float_value
    if isinstance(e, Var):
        if e.index > len(point):
            raise IndexError(f"point has no coordinate z{e.index}")
        return point[e.index - 1]
    if isinstance(e, Symbol):
        return _lookup(symbol_values, e.symbol)
    if isinstance(e, Add):
        total = 0j
        for c in e.children:
            total = total + _eval(c, point, symbol_values)
        return total
    if isinstance(e, Mul):
        prod = 1 + 0j
        for c in e.children:
            prod = prod * _eval(c, point, symbol_values)
        return prod
    if isinstance(e, IntPow):
        return _eval(e.base, point, symbol_values) ** e.exponent
    if isinstance(e, Exp):
        return np.exp(_eval(e.arg, point, symbol_values))
    if isinstance(e, Sin):
        return np.sin(_eval(e.arg, point, symbol_values))
    if isinstance(e, Cos):
        return np.cos(_eval(e.arg, point, symbol_values))
    raise TypeError(f"unknown node {e!r}")


def evaluate(e: Expr, point: Sequence, symbol_values: Mapping | None = None):
    """Numeric value of ``e`` at ``point``.

    ``point`` holds one complex per coordinate, or one array per coordinate
    for vectorised evaluation (the result then has the array shape).
    ``symbol_values`` maps an :class:`OpaqueSymbol` or its name to a value
    (or array) of that symbol at the same point.
    """
    symbol_values = symbol_values or {}
    with np.errstate(all="ignore"):
        out = _eval(e, point, symbol_values)
    if np.ndim(out) == 0:
        return complex(out)
    return np.asarray(out, dtype=complex)


eval_expr = evaluate
