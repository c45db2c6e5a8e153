"""Exact complex scalars: polynomials in pi over the Gaussian rationals.

A :class:`Scalar` is either exact, ``sum_k (a_k + b_k*i) * pi**k`` with
rational ``a_k, b_k``, or an inexact complex double.  Exact arithmetic is
closed under ``+ - *``; division is exact only by a nonzero Gaussian
rational and otherwise demotes to a float.  Because pi is transcendental,
equality of exact scalars is decided coefficient by coefficient.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational
from typing import Union

GaussQ = tuple[Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

ScalarLike = Union["Scalar", int, Fraction, float, complex]


def _strip(coeffs: list[GaussQ]) -> tuple[GaussQ, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1][0] == 0 and coeffs[n - 1][1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _gmul(a: GaussQ, b: GaussQ) -> GaussQ:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


class Scalar:
    """Element of Q(i)[pi] with a complex-double fallback."""

    __slots__ = ("_c", "_approx", "_hash")

    def __init__(self, value: ScalarLike = 0, imag: ScalarLike = 0):
        if isinstance(value, Scalar):
            if imag:
                raise TypeError("imag is only accepted with rational input")
            self._c, self._approx = value._c, value._approx
        elif isinstance(value, (int, Rational)) and isinstance(imag, (int, Rational)):
            self._c = _strip([(Fraction(value), Fraction(imag))])
            self._approx = None
        else:
            self._c = None
            self._approx = complex(value) + 1j * complex(imag)
        self._hash = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def _exact(cls, coeffs) -> Scalar:
        s = cls.__new__(cls)
        s._c = _strip(list(coeffs))
        s._approx = None
        s._hash = None
        return s

    @classmethod
    def inexact(cls, value: complex) -> Scalar:
        s = cls.__new__(cls)
        s._c = None
        s._approx = complex(value)
        s._hash = None
        return s

    @classmethod
    def of(cls, value: ScalarLike) -> Scalar:
        return value if isinstance(value, Scalar) else cls(value)

    @classmethod
    def pi(cls, coeff: ScalarLike = 1) -> Scalar:
        """``coeff * pi`` for a rational or Gaussian-rational ``coeff``."""
        c = cls.of(coeff)
        return c * PI

    @classmethod
    def from_parts(cls, rat_part: GaussQ, pi_part: GaussQ = (_ZERO, _ZERO)) -> Scalar:
        return cls._exact([tuple(map(Fraction, rat_part)), tuple(map(Fraction, pi_part))])

    # -- inspection ----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._c is not None

    @property
    def coeffs(self) -> tuple[GaussQ, ...]:
        """Gaussian-rational coefficients of ``pi**0, pi**1, ...`` (exact only)."""
        if self._c is None:
            raise ValueError("inexact scalar has no exact coefficients")
        return self._c

    def _part(self, k: int) -> GaussQ:
        c = self.coeffs
        return c[k] if k < len(c) else (_ZERO, _ZERO)

    @property
    def rat_part(self) -> GaussQ:
        return self._part(0)

    @property
    def pi_part(self) -> GaussQ:
        return self._part(1)

    @property
    def pi_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def float_value(self) -> complex:
        if self._approx is None:
            total = 0j
            for k, (re, im) in enumerate(self._c):
                if re or im:
                    total += complex(float(re), float(im)) * math.pi**k
            self._approx = total
        return self._approx

    def __complex__(self) -> complex:
        return self.float_value

    def is_zero(self, tol: float = 0.0) -> bool:
        if self._c is not None:
            return not self._c
        return abs(self._approx) <= tol

    def is_gaussian_rational(self) -> bool:
        return self._c is not None and len(self._c) <= 1

    def is_rational(self) -> bool:
        return self.is_gaussian_rational() and self.rat_part[1] == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.rat_part[0]

    def close_to(self, other: ScalarLike, tol: float = 1e-10) -> bool:
        a, b = self.float_value, Scalar.of(other).float_value
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        if self._c is None or other._c is None:
            return Scalar.inexact(self.float_value + other.float_value)
        a, b = self._c, other._c
        n = max(len(a), len(b))
        out = []
        for k in range(n):
            x = a[k] if k < len(a) else (_ZERO, _ZERO)
            y = b[k] if k < len(b) else (_ZERO, _ZERO)
            out.append((x[0] + y[0], x[1] + y[1]))
        return Scalar._exact(out)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        if self._c is None:
            return Scalar.inexact(-self._approx)
        return Scalar._exact([(-re, -im) for re, im in self._c])

    def __sub__(self, other: ScalarLike) -> Scalar:
        return self + (-Scalar.of(other))

    def __rsub__(self, other: ScalarLike) -> Scalar:
        return Scalar.of(other) - self

    def __mul__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        if self._c is None or other._c is None:
            return Scalar.inexact(self.float_value * other.float_value)
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        out = [(_ZERO, _ZERO)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not (x[0] or x[1]):
                continue
            for j, y in enumerate(b):
                p = _gmul(x, y)
                o = out[i + j]
                out[i + j] = (o[0] + p[0], o[1] + p[1])
        return Scalar._exact(out)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if self._c is not None and len(self._c) == 1:
            re, im = self._c[0]
            den = re * re + im * im
            return Scalar._exact([(re / den, -im / den)])
        return Scalar.inexact(1 / self.float_value)

    def __truediv__(self, other: ScalarLike) -> Scalar:
        return self * Scalar.of(other).inverse()

    def __rtruediv__(self, other: ScalarLike) -> Scalar:
        return Scalar.of(other) * self.inverse()

    def __pow__(self, n: int) -> Scalar:
        if not isinstance(n, int):
            raise TypeError("Scalar powers take integer exponents")
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> Scalar:
        if self._c is None:
            return Scalar.inexact(self._approx.conjugate())
        return Scalar._exact([(re, -im) for re, im in self._c])

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, float, complex, Rational)):
                other = Scalar(other)
            else:
                return NotImplemented
        if self._c is not None and other._c is not None:
            return self._c == other._c
        if self._c is None and other._c is None:
            return self._approx == other._approx
        return False

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("exact", self._c) if self._c is not None else ("float", self._approx))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar._exact([])
ONE = Scalar._exact([(_ONE, _ZERO)])
I = Scalar._exact([(_ZERO, _ONE)])
PI = Scalar._exact([(_ZERO, _ZERO), (_ONE, _ZERO)])


def scalar_exp(s: ScalarLike) -> Scalar:
    """``e**s``, exact when ``s = i*pi*q`` with ``2q`` an integer.

    Those are the only exponents whose value (one of ``1, i, -1, -i``) lies in
    the Gaussian rationals; any other argument yields an inexact scalar.
    """
    s = Scalar.of(s)
    if s.is_exact:
        if s.is_zero():
            return ONE
        c = s.coeffs
        if len(c) == 2 and c[0] == (_ZERO, _ZERO) and c[1][0] == 0:
            q2 = 2 * c[1][1]
            if q2.denominator == 1:
                return (ONE, I, -ONE, -I)[int(q2) % 4]
    return Scalar.inexact(cmath.exp(s.float_value))


def scalar_sin(s: ScalarLike) -> Scalar:
    s = Scalar.of(s)
    return (scalar_exp(I * s) - scalar_exp(-I * s)) / (2 * I)


def scalar_cos(s: ScalarLike) -> Scalar:
    s = Scalar.of(s)
    return (scalar_exp(I * s) + scalar_exp(-I * s)) / 2


def split_quarter_turns(s: Scalar) -> tuple[Scalar, int]:
    """Write exact ``s = r + k*i*pi/2`` with the ``i*pi`` coefficient of ``r`` in ``[0, 1/2)``.

    Returns ``(r, k)``; ``e**s == i**k * e**r`` exactly.
    """
    c = s.coeffs
    if len(c) < 2:
        return s, 0
    b = c[1][1]
    k = math.floor(2 * b)
    if k == 0:
        return s, 0
    return s - Scalar.pi(Scalar(0, Fraction(k, 2))), k


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def scalar_monomials(s: Scalar) -> list[str]:
    """Signed printable monomials of an exact scalar, e.g. ``['-(1/2)*pi*i']``."""
    out = []
    for k, (re, im) in enumerate(s.coeffs):
        for q, unit in ((re, ""), (im, "i")):
            if q == 0:
                continue
            factors = []
            if k == 1:
                factors.append("pi")
            elif k > 1:
                factors.append(f"pi^{k}")
            if unit:
                factors.append(unit)
            mag = abs(q)
            if mag != 1 or not factors:
                factors.insert(0, _format_fraction(mag))
            out.append(("-" if q < 0 else "") + "*".join(factors))
    return out


def format_scalar(s: Scalar) -> str:
    """Canonical text form, reparseable by the expression grammar."""
    if not s.is_exact:
        z = s.float_value
        if z.imag == 0:
            return repr(z.real)
        if z.real == 0:
            return f"{z.imag!r}*i"
        sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
        return f"{z.real!r} {sign} {abs(z.imag)!r}*i"
    monos = scalar_monomials(s)
    if not monos:
        return "0"
    text = monos[0]
    for m in monos[1:]:
        text += f" - {m[1:]}" if m.startswith("-") else f" + {m}"
    return text
