"""A solvable system against an impossible one on the same small ansatz.

Pass --probe to run the full ladder probe for (2, 2, 2, 1), which takes a
minute or two on one core.
"""
import sys

from fermat_pdde.scalar import PI
from fermat_pdde.search import AnsatzSpec, minimize, nonexistence_probe, system_from_quadruple

ansatz = AnsatzSpec(2, 0, 1, 1, ((1j, 1j),))
for q in ((2, 2, 2, 2), (2, 2, 2, 1)):
    rep = minimize(system_from_quadruple(q, [2 * PI, 0]), ansatz, restarts=20, seed=0)
    print(q, f"best residual {rep.best_residual:.3e} after {rep.restarts} restarts")

if "--probe" in sys.argv:
    probe = nonexistence_probe((2, 2, 2, 1), [2 * PI, 0], restarts=20)
    for r in probe.probe:
        print("rung", r.ansatz.max_poly_degree, r.ansatz.freq_bound, f"{r.best_residual:.3e}")
    print("control", f"{probe.control_best:.3e}", "passed" if probe.passed else "failed")
