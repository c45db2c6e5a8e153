import cmath
import itertools
import random

import pytest

from fermat_pdde.calculus import ShiftVector, SystemSpec
from fermat_pdde.errors import InvalidFamily
from fermat_pdde.expr import OpaqueSymbol, SymbolRegistry
from fermat_pdde.families import (
    QuadraticFamilySpec,
    SineFamilySpec,
    SingleQuadraticSpec,
    SingleSineSpec,
    build,
    build_quadratic_pair,
    build_sine_pair,
    build_single_eq_sine,
    classify,
    dump_family,
    load_family,
    perturb_quadratic,
    perturb_sine,
    quadratic_pair,
    random_quadratic_spec,
    random_sine_spec,
    sine_pair,
    solve_admissible_AB,
    validate,
    validate_quadratic,
    validate_sine,
)
from fermat_pdde.normal_form import nf_equal, verify_system
from fermat_pdde.parser import parse_expr
from fermat_pdde.scalar import PI, ZERO, Scalar


def exact_zero(spec, f1, f2):
    rep = verify_system(spec, f1, f2)
    return rep.mode == "exact" and rep.verdict == "identity-zero"


def by_name(checks):
    return {c.name: c for c in checks}


# -- classifier ---------------------------------------------------------------


@pytest.mark.parametrize(
    "q, want",
    [
        ((2, 2, 2, 2), "SineFamily"),
        ((2, 1, 2, 1), "QuadraticFamily"),
        ((2, 2, 2, 1), "NonExistence(2ii)"),
        ((2, 1, 2, 2), "NonExistence(2ii)"),
        ((3, 1, 2, 1), "NonExistence(2iii)"),
        ((1, 3, 1, 3), "NonExistence(2i)"),
        ((4, 1, 1, 3), "NonExistence(2iv)"),
        ((3, 1, 1, 2), "Unknown"),
        ((1, 1, 1, 1), "ExcludedTrivial"),
    ],
)
def test_classify_table(q, want):
    assert str(classify(*q)) == want


def test_classify_total_and_deterministic():
    tags = {"SineFamily", "QuadraticFamily", "NonExistence", "Unknown", "ExcludedTrivial"}
    for q in itertools.product(range(1, 7), repeat=4):
        v = classify(*q)
        assert v.tag in tags and v.clause
        assert classify(*q) == v


def test_families_only_at_their_quadruples():
    found = {q: classify(*q).tag for q in itertools.product(range(1, 7), repeat=4)}
    assert [q for q, t in found.items() if t == "SineFamily"] == [(2, 2, 2, 2)]
    assert [q for q, t in found.items() if t == "QuadraticFamily"] == [(2, 1, 2, 1)]


def test_classify_rejects_bad_input():
    with pytest.raises(ValueError):
        classify(0, 1, 1, 1)
    with pytest.raises(ValueError):
        classify(True, 2, 2, 2)


# -- sine family ------------------------------------------------------------------


def c3_square_spec(variant="i"):
    q = parse_expr("(z2 - z3)^2", 3)
    return SineFamilySpec(3, 1, 1, (1, 1), (1, 1), q, parse_expr("(z2 - z3)^2 + pi", 3), [0, PI / 2, PI / 2], variant)


def c3_cube_spec():
    q = parse_expr("(z2 - z3)^3", 3)
    return SineFamilySpec(3, 1, 1, (1, -1), (1, -1), q, q, [0, PI, PI], "ii")


def ex11_spec():
    return SineFamilySpec(2, 1, 1, (1,), (1,), parse_expr("z2^2", 2), parse_expr("z2^2 + pi", 2), [2 * PI, 0])


def test_first_c3_example_passes_exactly():
    checks = validate_sine(c3_square_spec())
    assert all(c.passed and c.exact for c in checks)
    # B e^{2i*pi} reduces to exactly 1
    assert by_name(checks)["B*exp(2i*L1(c)) = A"].lhs == "1"


def test_second_c3_example_variant_ii():
    assert all(c.passed for c in validate_sine(c3_cube_spec()))


def test_sign_mismatch_fails():
    spec = SineFamilySpec(2, 1, -1, (1,), (-1,), parse_expr("z2^2", 2), parse_expr("-z2^2", 2), [2 * PI, 0])
    failed = {c.name for c in validate_sine(spec) if not c.passed}
    assert "B*exp(2i*L1(c)) = A" in failed


def test_build_example_pair():
    f1, f2 = build_sine_pair(ex11_spec())
    assert nf_equal(f1, parse_expr("sin(z1 + z2 + z2^2)", 2))
    assert nf_equal(f2, parse_expr("sin(z1 + z2 + z2^2 + pi)", 2))
    assert exact_zero(ex11_spec().system(), f1, f2)


@pytest.mark.parametrize("make", [c3_square_spec, c3_cube_spec])
def test_build_c3_pairs_verify(make):
    spec = make()
    assert exact_zero(spec.system(), *build_sine_pair(spec))


def test_zero_shift_degenerate_case():
    spec = SineFamilySpec(3, 1, 1, (1, 1), (1, 1), 0, 0, [0, 0, 0])
    f1, f2 = build_sine_pair(spec)
    assert nf_equal(f1, parse_expr("sin(z1 + z2 + z3)", 3)) and f1 == f2
    assert exact_zero(spec.system(), f1, f2)


def test_invalid_sine_raises_with_failures():
    spec = SineFamilySpec(2, 1, 1, (1,), (1,), parse_expr("z2^2", 2), parse_expr("z2^3", 2), [2 * PI, 0])
    with pytest.raises(InvalidFamily) as err:
        build_sine_pair(spec)
    assert err.value.failures and not any(f.passed for f in err.value.failures)


def test_non_polynomial_Q_rejected():
    spec = SineFamilySpec(2, 1, 1, (1,), (1,), parse_expr("sin(z2)", 2), 0, [2 * PI, 0])
    assert not all(c.passed for c in validate_sine(spec))


def test_solve_admissible_AB():
    assert solve_admissible_AB(2, [1], [1], [2 * PI, 0]) == {(1, 1), (-1, -1)}
    assert (1, 1) in solve_admissible_AB(3, [1, 1], [1, 1], [0, PI / 2, PI / 2])
    assert solve_admissible_AB(2, [1], [1], [2 * PI, 0], "ii") == {(1, 1), (-1, -1)}
    with pytest.raises(ValueError):
        solve_admissible_AB(2, [1, 1], [1], [0, 0])


def test_solve_admissible_AB_matches_brute_force():
    # independent oracle: evaluate the conditions in floating point
    rng = random.Random(3)
    for _ in range(40):
        m = rng.choice((2, 3))
        a = [rng.randint(-2, 2) for _ in range(m - 1)]
        b = [rng.randint(-2, 2) for _ in range(m - 1)]
        c = [rng.choice((ZERO, PI / 2, PI, 2 * PI)) for _ in range(m)]
        variant = rng.choice(("i", "ii"))
        cf = [x.float_value for x in c]
        want = set()
        for A, B in itertools.product((1, -1), repeat=2):
            L1 = A * cf[0] + sum(x * y for x, y in zip(a, cf[1:]))
            L2 = B * cf[0] + sum(x * y for x, y in zip(b, cf[1:]))
            e1, e2 = cmath.exp(2j * L1), cmath.exp(2j * L2)
            if variant == "i":
                ok = abs(B * e1 - A) < 1e-9 and abs(A * e2 - B) < 1e-9
            else:
                ok = abs(A * B * e1 - 1) < 1e-9 and abs(A * B * e2 - 1) < 1e-9
            if ok:
                want.add((A, B))
        assert solve_admissible_AB(m, a, b, c, variant) == want


def test_random_sine_specs_verify():
    rng = random.Random(11)
    for _ in range(100):
        spec = random_sine_spec(rng)
        assert all(c.passed for c in validate_sine(spec)), spec
        assert exact_zero(spec.system(), *build_sine_pair(spec)), spec


def test_sine_perturbations_fail():
    rng = random.Random(12)
    for k in range(100):
        spec = perturb_sine(random_sine_spec(rng), rng, k % 4)
        assert not all(c.passed for c in validate_sine(spec))
        rep = verify_system(spec.system(), *sine_pair(spec))
        assert rep.verdict == "nonzero", spec


# -- quadratic family -----------------------------------------------------------


def quad_spec(c=(0, PI, PI), rule=(0, PI, PI), adds=0, K=-1):
    g = OpaqueSymbol("g", [2, 3])
    g.add_rule(list(rule), adds)
    return QuadraticFamilySpec(3, K, K, g, g, list(c))


def test_quadratic_example_passes():
    checks = validate_quadratic(quad_spec())
    assert all(c.passed and c.exact for c in checks)
    assert by_name(checks)["g1(z+2c) - g1(z) = -K1*c1"].rhs == "0"


def test_quadratic_rule_over_double_shift_only():
    # the double-shift constraints hold, but g(z+c) itself is not derivable
    checks = by_name(validate_quadratic(quad_spec(rule=(0, 2 * PI, 2 * PI))))
    assert checks["g1(z+2c) - g1(z) = -K1*c1"].passed and checks["K2 = -K1^2"].passed
    assert not checks["g1(z+c) - g1(z) = c1/2"].passed


def test_quadratic_wrong_increment_fails():
    checks = by_name(validate_quadratic(quad_spec(c=(1, PI, PI))))
    bad = checks["g1(z+2c) - g1(z) = -K1*c1"]
    assert not bad.passed and bad.rhs == "1"


def test_non_real_cube_root_is_inexact():
    K = Scalar.inexact(cmath.exp(1j * cmath.pi / 3))
    checks = by_name(validate_quadratic(quad_spec(K=K)))
    assert checks["K1^3 = -1"].passed and not checks["K1^3 = -1"].exact
    # a shared symbol forces K = -1, so this spec cannot build
    assert not checks["shared symbol requires K1 = -1"].passed


def test_build_quadratic_example():
    g = OpaqueSymbol("g", [2, 3])
    g.add_rule([0, PI, PI], 0)
    spec = QuadraticFamilySpec(3, -1, -1, g, g, [0, PI, PI])
    f1, f2 = build_quadratic_pair(spec)
    reg = SymbolRegistry(3, [g])
    assert nf_equal(f1, parse_expr("1 - 1/4*z1^2 + z1*g - g^2", 3, reg)) and f1 == f2
    assert exact_zero(spec.system(), f1, f2)


def test_build_quadratic_zero_shift():
    spec = quad_spec(c=(0, 0, 0))
    assert exact_zero(spec.system(), *build_quadratic_pair(spec))


def test_invalid_quadratic_raises():
    with pytest.raises(InvalidFamily):
        build_quadratic_pair(quad_spec(c=(1, PI, PI)))


def test_single_equation_quadratic():
    g = OpaqueSymbol("g", [2])
    g.add_rule([2, PI], 1)
    spec = SingleQuadraticSpec(2, -1, g, [2, PI])
    f, f_again = build(spec)
    assert f is f_again
    assert exact_zero(spec.system(), f, f)


def test_random_quadratic_specs_verify():
    rng = random.Random(21)
    for _ in range(50):
        spec = random_quadratic_spec(rng)
        assert all(c.passed for c in validate_quadratic(spec))
        assert exact_zero(spec.system(), *build_quadratic_pair(spec)), spec


def test_quadratic_perturbations_fail():
    rng = random.Random(22)
    for k in range(50):
        spec = perturb_quadratic(random_quadratic_spec(rng), rng, k % 2)
        assert not all(c.passed for c in validate_quadratic(spec))
        rep = verify_system(spec.system(), *quadratic_pair(spec))
        assert rep.verdict == "nonzero"


# -- single-equation sine --------------------------------------------------------


def test_single_sine_example():
    spec = SingleSineSpec(2, 1, (2,), parse_expr("z2^3 + 1", 2), [2 * PI, 0])
    f = build_single_eq_sine(spec)
    assert nf_equal(f, parse_expr("sin(z1 + 2*z2 + z2^3 + 1)", 2))
    assert exact_zero(spec.system(), f, f)


def test_single_sine_trivial():
    f = build_single_eq_sine(SingleSineSpec(1, 1, (), 0, [0]))
    assert nf_equal(f, parse_expr("sin(z1)", 1))


def test_single_sine_negative_lead():
    spec = SingleSineSpec(2, -1, (0,), 0, [PI, 0])
    f = build_single_eq_sine(spec)
    assert exact_zero(spec.system(), f, f)


def test_single_sine_period_is_c_not_2c():
    # z2 has period 2c but not c
    spec = SingleSineSpec(2, 1, (0,), parse_expr("z2", 2), [2 * PI, PI])
    assert not all(c.passed for c in validate(spec))
    with pytest.raises(InvalidFamily):
        build_single_eq_sine(spec)


# -- serialisation ----------------------------------------------------------------


def test_dump_load_roundtrip():
    rng = random.Random(5)
    specs = [ex11_spec(), c3_cube_spec(), quad_spec(), SingleSineSpec(2, 1, (2,), parse_expr("z2^3 + 1", 2), [2 * PI, 0])]
    specs += [random_sine_spec(rng) for _ in range(10)] + [random_quadratic_spec(rng) for _ in range(5)]
    for spec in specs:
        doc = dump_family(spec)
        back = load_family(doc)
        assert dump_family(back) == doc
        assert [c.passed for c in validate(back)] == [c.passed for c in validate(spec)]


def test_system_spec_of_families():
    assert ex11_spec().system() == SystemSpec(2, 2, 2, 2, 2, ShiftVector([2 * PI, 0]))
    assert quad_spec().system().quadruple == (2, 1, 2, 1)
