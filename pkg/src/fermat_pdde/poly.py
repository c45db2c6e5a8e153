"""Sparse multivariate polynomials with :class:`Scalar` coefficients.

Variables are keyed ``(0, i)`` for ``z_i`` and ``(1, name)`` for an opaque
symbol, so the natural tuple order puts ``z1 < z2 < ... < symbols``.  A
monomial is a sorted tuple of ``(var, exponent)`` pairs.
"""
from __future__ import annotations

from typing import Callable, Iterable, Mapping, Union

from .scalar import ONE, ZERO, Scalar, ScalarLike

VarKey = tuple  # (0, int) | (1, str)
Monomial = tuple  # tuple[tuple[VarKey, int], ...]

UNIT: Monomial = ()


def zvar(i: int) -> VarKey:
    return (0, i)


def svar(symbol) -> VarKey:
    """Key for an opaque symbol (an :class:`OpaqueSymbol` or a bare name)."""
    return (1, symbol)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def grlex_key(m: Monomial):
    """Sort key: total degree, then exponents in variable order."""
    return (mono_degree(m), tuple((v, e) for v, e in m))


class Poly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("_t", "_hash", "_tol")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, tol: float = 0.0):
        self._t: dict[Monomial, Scalar] = {}
        self._hash = None
        self._tol = tol
        if terms:
            for m, c in terms.items():
                if not c.is_zero(tol):
                    self._t[m] = c

    # -- construction --------------------------------------------------------

    @classmethod
    def const(cls, c: ScalarLike) -> Poly:
        return cls({UNIT: Scalar.of(c)})

    @classmethod
    def var(cls, key: VarKey) -> Poly:
        return cls({((key, 1),): ONE})

    @classmethod
    def _raw(cls, terms: dict, tol: float) -> Poly:
        p = cls.__new__(cls)
        p._t = terms
        p._hash = None
        p._tol = tol
        return p

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Scalar]:
        return self._t

    def is_zero(self) -> bool:
        return not self._t

    def is_exact(self) -> bool:
        return all(c.is_exact for c in self._t.values())

    def constant_term(self) -> Scalar:
        return self._t.get(UNIT, ZERO)

    def without_constant(self) -> Poly:
        return Poly._raw({m: c for m, c in self._t.items() if m}, self._tol)

    def is_constant(self) -> bool:
        return all(not m for m in self._t)

    def variables(self) -> set:
        return {v for m in self._t for v, _ in m}

    def degree(self, key: VarKey | None = None) -> int:
        if not self._t:
            return -1
        if key is None:
            return max(mono_degree(m) for m in self._t)
        return max(dict(m).get(key, 0) for m in self._t)

    def sorted_terms(self, descending: bool = True) -> list[tuple[Monomial, Scalar]]:
        return sorted(self._t.items(), key=lambda mc: grlex_key(mc[0]), reverse=descending)

    def max_abs_coeff(self) -> float:
        return max((abs(c.float_value) for c in self._t.values()), default=0.0)

    # -- arithmetic ----------------------------------------------------------

    def _merge_tol(self, other: Poly) -> float:
        return max(self._tol, other._tol)

    def __add__(self, other: Union[Poly, ScalarLike]) -> Poly:
        other = _coerce(other)
        tol = self._merge_tol(other)
        out = dict(self._t)
        for m, c in other._t.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero(tol):
                out.pop(m, None)
            else:
                out[m] = s
        return Poly._raw(out, tol)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._t.items()}, self._tol)

    def __sub__(self, other: Union[Poly, ScalarLike]) -> Poly:
        return self + (-_coerce(other))

    def __rsub__(self, other: Union[Poly, ScalarLike]) -> Poly:
        return _coerce(other) - self

    def __mul__(self, other: Union[Poly, ScalarLike]) -> Poly:
        other = _coerce(other)
        tol = self._merge_tol(other)
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = mono_mul(m1, m2)
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if not c.is_zero(tol)}, tol)

    __rmul__ = __mul__

    def scale(self, c: ScalarLike) -> Poly:
        c = Scalar.of(c)
        return Poly({m: c * v for m, v in self._t.items()}, self._tol)

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative polynomial power")
        result, base = Poly.const(ONE), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, key: VarKey) -> Poly:
        out: dict[Monomial, Scalar] = {}
        for m, c in self._t.items():
            d = dict(m)
            e = d.get(key, 0)
            if not e:
                continue
            if e == 1:
                del d[key]
            else:
                d[key] = e - 1
            nm = tuple(sorted(d.items()))
            out[nm] = out.get(nm, ZERO) + c * e
        return Poly(out, self._tol)

    def substitute(self, images: Mapping[VarKey, Poly]) -> Poly:
        """Replace variables by polynomials and expand."""
        cache: dict[tuple, Poly] = {}

        def power(v, e):
            k = (v, e)
            if k not in cache:
                cache[k] = images[v] ** e
            return cache[k]

        total = Poly(tol=self._tol)
        for m, c in self._t.items():
            term = Poly._raw({UNIT: c}, self._tol)
            rest = []
            for v, e in m:
                if v in images:
                    term = term * power(v, e)
                else:
                    rest.append((v, e))
            if rest:
                term = term * Poly._raw({tuple(rest): ONE}, self._tol)
            total = total + term
        return total

    def evaluate(self, values: Callable[[VarKey], object]):
        """Numeric evaluation; ``values(key)`` returns a complex or an array."""
        total = 0j
        for m, c in self._t.items():
            t = c.float_value
            for v, e in m:
                t = t * values(v) ** e
            total = total + t
        return total

    # -- equality ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._t == other._t
        if isinstance(other, (Scalar, int)):
            return self._t == Poly.const(other)._t
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


def _coerce(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def var_name(key: VarKey) -> str:
    return f"z{key[1]}" if key[0] == 0 else str(getattr(key[1], "name", key[1]))


def format_poly(p: Poly) -> str:
    from .scalar import format_scalar

    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        body = "*".join(var_name(v) + (f"^{e}" if e > 1 else "") for v, e in m)
        cs = format_scalar(c)
        if not body:
            parts.append(cs if " " not in cs else f"({cs})")
        elif c == ONE:
            parts.append(body)
        elif c == -ONE:
            parts.append("-" + body)
        else:
            parts.append((f"({cs})" if " " in cs else cs) + "*" + body)
    text = parts[0]
    for t in parts[1:]:
        text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return text


def poly_sum(items: Iterable[Poly]) -> Poly:
    total = Poly()
    for p in items:
        total = total + p
    return total
