"""Build members of both families from parameters and check them exactly."""
import random

from fermat_pdde.expr import OpaqueSymbol
from fermat_pdde.families import (
    QuadraticFamilySpec,
    build_quadratic_pair,
    build_sine_pair,
    random_sine_spec,
    solve_admissible_AB,
    validate_sine,
)
from fermat_pdde.normal_form import verify_system
from fermat_pdde.parser import print_expr
from fermat_pdde.scalar import PI

print("admissible (A, B) for c = (2pi, 0):", sorted(solve_admissible_AB(2, [1], [1], [2 * PI, 0])))

rng = random.Random(7)
for _ in range(3):
    spec = random_sine_spec(rng)
    f1, f2 = build_sine_pair(spec)
    rep = verify_system(spec.system(), f1, f2)
    print(f"\nm={spec.m} c={spec.c} variant {spec.variant}")
    print("  f1 =", print_expr(f1))
    print("  f2 =", print_expr(f2))
    print("  constraints:", sum(c.passed for c in validate_sine(spec)), "passed;", rep.verdict)

g = OpaqueSymbol("g", [2, 3])
g.add_rule([0, PI, PI], 0)
spec = QuadraticFamilySpec(3, -1, -1, g, g, [0, PI, PI])
f1, _ = build_quadratic_pair(spec)
print("\nquadratic member:", print_expr(f1), "->", verify_system(spec.system(), f1, f1).verdict)
