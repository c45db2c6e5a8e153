"""Random admissible expressions for property tests.

Everything is driven by a ``random.Random`` so a failing case can be
replayed from its seed; :func:`expr_strategy` wraps that for hypothesis.
"""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from fermat_pdde.expr import OpaqueSymbol, add, const, cos, exp, mul, power, sin, z
from fermat_pdde.scalar import I, PI, Scalar


def rand_rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def rand_scalar(rng: random.Random, with_pi: bool = True) -> Scalar:
    s = Scalar(rand_rational(rng), rand_rational(rng) if rng.random() < 0.4 else 0)
    if with_pi and rng.random() < 0.25:
        s = s + PI * I * Fraction(rng.randint(-4, 4), 2)
    return s


def rand_shift(rng: random.Random, m: int) -> list[Scalar]:
    choices = [Scalar(0), PI, 2 * PI, PI / 2, I * PI, Scalar(1), Scalar(Fraction(1, 2), 1)]
    return [rng.choice(choices) for _ in range(m)]


def rand_poly(rng: random.Random, m: int, degree: int = 2, symbols=()):
    """Small polynomial in ``z1..zm`` (and, linearly, the given symbols)."""
    terms = []
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(0, degree)
        factors = [z(rng.randint(1, m)) for _ in range(d)]
        terms.append(mul(const(rand_rational(rng, 2) or 1), *factors))
    if symbols and rng.random() < 0.5:
        terms.append(rng.choice(symbols))
    return add(*terms)


def rand_arg(rng: random.Random, m: int, symbols=()):
    """Admissible argument of exp/sin/cos with modest size on the unit polydisc."""
    p = rand_poly(rng, m, degree=2)
    if rng.random() < 0.3:
        p = add(p, const(PI * Fraction(rng.randint(-2, 2), 2)))
    if symbols and rng.random() < 0.3:
        p = add(p, rng.choice(symbols))
    return p


def rand_expr(rng: random.Random, m: int = 2, depth: int = 2, symbols=(), symbols_in_args: bool = False):
    """Random admissible expression.

    Symbols appear polynomially; inside transcendental arguments only when
    ``symbols_in_args`` is set (such expressions leave the exact class).
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.3:
            return const(rand_scalar(rng))
        if r < 0.85 or not symbols:
            return z(rng.randint(1, m))
        return rng.choice(symbols)
    kind = rng.choice(["add", "add", "mul", "pow", "exp", "sin", "cos"])
    sub = lambda: rand_expr(rng, m, depth - 1, symbols, symbols_in_args)  # noqa: E731
    if kind == "add":
        return add(*(sub() for _ in range(rng.randint(2, 3))))
    if kind == "mul":
        return mul(sub(), sub())
    if kind == "pow":
        return power(sub(), rng.randint(2, 3))
    fn = {"exp": exp, "sin": sin, "cos": cos}[kind]
    return fn(rand_arg(rng, m, symbols if symbols_in_args else ()))


def make_symbols(m: int) -> tuple:
    """Two opaque symbols with a few shift rules, for dimension ``m >= 2``."""
    g = OpaqueSymbol("g", range(2, m + 1))
    g.add_rule([0] + [2 * PI] * (m - 1), 0)
    h = OpaqueSymbol("h", [2])
    h.add_rule([0, PI] + [0] * (m - 2), 1)
    return g, h


def expr_strategy(m: int = 2, depth: int = 2, symbols=()):
    return st.integers(0, 2**32 - 1).map(lambda s: rand_expr(random.Random(s), m, depth, symbols))


def seed_strategy():
    return st.integers(0, 2**32 - 1)
