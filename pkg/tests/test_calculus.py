import random

import numpy as np
import pytest
from hypothesis import given, settings

from fermat_pdde.calculus import ShiftVector, SystemSpec, partial, residuals, shift, single_residual
from fermat_pdde.errors import OpaqueDerivative, UnknownSymbolShift
from fermat_pdde.expr import Const, Cos, OpaqueSymbol, Symbol, add, const, evaluate, exp, mul, neg, power, sin, z
from fermat_pdde.normal_form import nf_equal, to_nf
from fermat_pdde.scalar import I, PI, ZERO, Scalar
from exprgen import rand_expr, rand_scalar, rand_shift, seed_strategy


def g_symbol(rule_shift=(0, 2 * PI, 2 * PI), adds=0):
    g = OpaqueSymbol("g", [2, 3])
    g.add_rule(list(rule_shift), adds)
    return g


def quadratic(g):
    return add(1, mul(const(Scalar(-1) / 4), power(z(1), 2)), mul(Symbol(g), z(1)), neg(power(Symbol(g), 2)))


def test_partial_of_sine_phase():
    u = add(z(1), z(2), power(z(2), 2))
    assert partial(sin(u), 1) == Cos(u)


def test_partial_of_quadratic_expression():
    g = g_symbol()
    d = partial(quadratic(g), 1)
    assert nf_equal(d, add(mul(const(Scalar(-1) / 2), z(1)), Symbol(g)))


def test_partial_of_function_of_other_variable():
    assert partial(power(z(2), 3), 1) == Const(ZERO)


def test_symbol_derivative_rules():
    g = g_symbol()
    assert partial(Symbol(g), 1) == Const(ZERO)
    with pytest.raises(OpaqueDerivative):
        partial(Symbol(g), 2)


def test_shift_polynomial():
    c1 = Scalar(3, 1)
    e = shift(power(z(1), 2), [c1, 0])
    assert nf_equal(e, add(power(z(1), 2), mul(2 * c1, z(1)), const(c1 * c1)))


def test_shift_symbol_by_rule():
    g = g_symbol()
    assert shift(Symbol(g), [0, 2 * PI, 2 * PI]) == Symbol(g)
    h = g_symbol(adds=Scalar(2))
    assert nf_equal(shift(Symbol(h), [5, 4 * PI, 4 * PI]), add(Symbol(h), 4))


def test_shift_symbol_unknown():
    g = g_symbol()
    with pytest.raises(UnknownSymbolShift):
        shift(Symbol(g), [0, PI, PI])


def test_shift_sine_by_period():
    u = add(z(1), z(2), power(z(2), 2))
    e = shift(sin(add(u, const(PI))), [2 * PI, 0])
    assert nf_equal(e, neg(sin(u)))


def test_residuals_sine_pair():
    spec = SystemSpec(2, 2, 2, 2, 2, ShiftVector([2 * PI, 0]))
    u = add(z(1), z(2), power(z(2), 2))
    r1, r2 = residuals(spec, sin(u), sin(add(u, const(PI))))
    assert to_nf(r1).is_zero() and to_nf(r2).is_zero()


def test_residuals_quadratic_pair():
    g = OpaqueSymbol("g", [2, 3])
    g.add_rule([0, PI, PI], 0)
    spec = SystemSpec(3, 2, 2, 1, 1, ShiftVector([0, PI, PI]))
    f = quadratic(g)
    r1, r2 = residuals(spec, f, f)
    assert to_nf(r1).is_zero() and to_nf(r2).is_zero()


def test_residuals_exponential_case():
    spec = SystemSpec(2, 1, 1, 1, 1, ShiftVector([I * PI, 0]))
    f = add(exp(add(z(1), z(2))), 1)
    assert all(to_nf(r).is_zero() for r in residuals(spec, f, f))


def test_single_residual_matches_system():
    f = sin(add(z(1), mul(2, z(2)), power(z(2), 3), 1))
    assert to_nf(single_residual(2, 2, [2 * PI, 0], f)).is_zero()


def test_system_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(2, 0, 1, 1, 1, ShiftVector([0, 0]))
    with pytest.raises(ValueError):
        SystemSpec(3, 1, 1, 1, 1, ShiftVector([0, 0]))
    assert SystemSpec(2, 2, 2, 1, 1, ShiftVector([0, 0])).quadruple == (2, 1, 2, 1)


# -- properties ------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seed_strategy())
def test_linearity(seed):
    rng = random.Random(seed)
    e1, e2, a = rand_expr(rng), rand_expr(rng), rand_scalar(rng)
    for i in (1, 2):
        lhs = partial(add(mul(a, e1), e2), i)
        rhs = add(mul(a, partial(e1, i)), partial(e2, i))
        assert nf_equal(lhs, rhs)


@settings(max_examples=60, deadline=None)
@given(seed_strategy())
def test_product_rule(seed):
    rng = random.Random(seed)
    e1, e2 = rand_expr(rng), rand_expr(rng)
    lhs = partial(mul(e1, e2), 1)
    rhs = add(mul(partial(e1, 1), e2), mul(e1, partial(e2, 1)))
    assert nf_equal(lhs, rhs)


@settings(max_examples=60, deadline=None)
@given(seed_strategy())
def test_shift_commutes_with_derivative(seed):
    rng = random.Random(seed)
    e, c = rand_expr(rng), rand_shift(rng, 2)
    assert nf_equal(shift(partial(e, 1), c), partial(shift(e, c), 1))


@settings(max_examples=60, deadline=None)
@given(seed_strategy())
def test_finite_difference(seed):
    rng = random.Random(seed)
    e = rand_expr(rng)
    h = 1e-5
    r, t = np.sqrt(rng.random()), 2 * np.pi * rng.random()
    pt = [r * np.exp(1j * t), complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))]
    fd = (evaluate(e, [pt[0] + h, pt[1]]) - evaluate(e, [pt[0] - h, pt[1]])) / (2 * h)
    assert abs(evaluate(partial(e, 1), pt) - fd) <= 1e-6


@settings(max_examples=60, deadline=None)
@given(seed_strategy())
def test_shift_matches_evaluation(seed):
    rng = random.Random(seed)
    e = rand_expr(rng)
    c = [complex(x.float_value) for x in rand_shift(rng, 2)]
    pt = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2)]
    got = evaluate(shift(e, [Scalar.of(x) for x in c]), pt)
    want = evaluate(e, [pt[0] + c[0], pt[1] + c[1]])
    # absolute for |value| <= 1, relative beyond (values reach 1e6 after a shift by 2*pi)
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))
