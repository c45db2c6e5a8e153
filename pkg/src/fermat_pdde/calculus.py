"""Differentiation, the shift operator and the residuals of the system

    (d f1/d z1)^n1 + f2(z + c)^m1 = 1
    (d f2/d z1)^n2 + f1(z + c)^m2 = 1
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import OpaqueDerivative
from .expr import (
    Add,
    Const,
    Cos,
    Exp,
    Expr,
    IntPow,
    Mul,
    Sin,
    Symbol,
    Var,
    add,
    cos,
    exp,
    free_symbols,
    from_poly,
    has_transcendental,
    max_var,
    mul,
    neg,
    power,
    sin,
    to_poly,
)
from .poly import Poly, svar, zvar
from .scalar import ONE, ZERO, Scalar, ScalarLike, format_scalar


@dataclass(frozen=True)
class ShiftVector:
    """The shift ``c = (c1, ..., cm)``; components are :class:`Scalar`."""

    components: tuple

    def __init__(self, components: Iterable[ScalarLike]):
        comps = tuple(Scalar.of(x) for x in components)
        if not comps:
            raise ValueError("shift vector must have at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, m: int) -> ShiftVector:
        return cls([ZERO] * m)

    @property
    def m(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, k):
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def scaled(self, k: ScalarLike) -> ShiftVector:
        return ShiftVector([x * k for x in self.components])

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components)

    def is_exact(self) -> bool:
        return all(x.is_exact for x in self.components)

    def as_complex(self) -> list[complex]:
        return [x.float_value for x in self.components]

    def __str__(self) -> str:
        return "(" + ", ".join(format_scalar(x) for x in self.components) + ")"


@dataclass(frozen=True)
class SystemSpec:
    """Dimension, the four exponents and the shift of the system."""

    m: int
    n1: int
    n2: int
    m1: int
    m2: int
    c: ShiftVector

    def __post_init__(self):
        if not isinstance(self.c, ShiftVector):
            object.__setattr__(self, "c", ShiftVector(self.c))
        if self.m < 1:
            raise ValueError("dimension must be >= 1")
        for name in ("n1", "n2", "m1", "m2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if len(self.c) != self.m:
            raise ValueError(f"shift has {len(self.c)} components, dimension is {self.m}")

    @property
    def quadruple(self) -> tuple[int, int, int, int]:
        """Exponents in classifier order ``(n1, m1, n2, m2)``."""
        return (self.n1, self.m1, self.n2, self.m2)

    def is_nontrivial(self) -> bool:
        return self.n1 + self.m1 > 2 and self.n2 + self.m2 > 2


# ---------------------------------------------------------------------------
# differentiation


def partial(e: Expr, i: int) -> Expr:
    """Symbolic derivative of ``e`` in ``z_i``."""
    if isinstance(e, Const):
        return Const(ZERO)
    if isinstance(e, Var):
        return Const(ONE if e.index == i else ZERO)
    if isinstance(e, Symbol):
        if i in e.symbol.depends_on:
            raise OpaqueDerivative(e.symbol.name, i)
        return Const(ZERO)
    if isinstance(e, Add):
        return add(*(partial(c, i) for c in e.children))
    if isinstance(e, Mul):
        ch = e.children
        terms = []
        for k, c in enumerate(ch):
            d = partial(c, i)
            if isinstance(d, Const) and d.value.is_zero():
                continue
            terms.append(mul(*ch[:k], d, *ch[k + 1:]))
        return add(*terms)
    if isinstance(e, IntPow):
        d = partial(e.base, i)
        if isinstance(d, Const) and d.value.is_zero():
            return Const(ZERO)
        return mul(Const(Scalar(e.exponent)), power(e.base, e.exponent - 1), d)
    if isinstance(e, Exp):
        return mul(e, partial(e.arg, i))
    if isinstance(e, Sin):
        return mul(Cos(e.arg), partial(e.arg, i))
    if isinstance(e, Cos):
        return neg(mul(Sin(e.arg), partial(e.arg, i)))
    raise TypeError(f"unknown node {e!r}")


# ---------------------------------------------------------------------------
# shift


def _shift_images(e: Expr, c: Sequence[Scalar]) -> dict:
    images = {}
    for j, cj in enumerate(c, start=1):
        if not cj.is_zero():
            images[zvar(j)] = Poly.var(zvar(j)) + cj
    for sym in free_symbols(e):
        s = sym.shift_constant(c)
        if not s.is_zero():
            images[svar(sym)] = Poly.var(svar(sym)) + s
    return images


def _shift_poly(e: Expr, c) -> Expr:
    images = _shift_images(e, c)
    if not images:
        return e
    return from_poly(to_poly(e).substitute(images))


def _shift(e: Expr, c) -> Expr:
    if not has_transcendental(e):
        return _shift_poly(e, c)
    if isinstance(e, Add):
        return add(*(_shift(x, c) for x in e.children))
    if isinstance(e, Mul):
        return mul(*(_shift(x, c) for x in e.children))
    if isinstance(e, IntPow):
        return power(_shift(e.base, c), e.exponent)
    if isinstance(e, Exp):
        return exp(_shift_poly(e.arg, c))
    if isinstance(e, Sin):
        return sin(_shift_poly(e.arg, c))
    if isinstance(e, Cos):
        return cos(_shift_poly(e.arg, c))
    raise TypeError(f"unknown node {e!r}")


def shift(e: Expr, c: ShiftVector | Sequence[ScalarLike]) -> Expr:
    """``e(z + c)``: variables become ``z_j + c_j``, symbols follow their shift rules.

    Polynomial parts are expanded eagerly.  Raises UnknownSymbolShift when a
    symbol's shift is not derivable from its rules.
    """
    comps = tuple(Scalar.of(x) for x in c)
    if max_var(e) > len(comps):
        raise ValueError(f"expression uses z{max_var(e)} but the shift has {len(comps)} components")
    return _shift(e, comps)


# ---------------------------------------------------------------------------
# residuals


def residuals(spec: SystemSpec, f1: Expr, f2: Expr) -> tuple[Expr, Expr]:
    """``(R1, R2)`` whose identical vanishing means ``(f1, f2)`` solves the system."""
    for f in (f1, f2):
        if max_var(f) > spec.m:
            raise ValueError(f"expression uses z{max_var(f)} in dimension {spec.m}")
    r1 = add(power(partial(f1, 1), spec.n1), power(shift(f2, spec.c), spec.m1), Const(-ONE))
    r2 = add(power(partial(f2, 1), spec.n2), power(shift(f1, spec.c), spec.m2), Const(-ONE))
    return r1, r2


def single_residual(n: int, mexp: int, c, f: Expr) -> Expr:
    """Residual of the single equation ``(d f/d z1)^n + f(z + c)^mexp = 1``."""
    return add(power(partial(f, 1), n), power(shift(f, c), mexp), Const(-ONE))
