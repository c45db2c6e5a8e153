"""Verify every bundled example pair and show what a broken pair looks like."""
from fermat_pdde.calculus import ShiftVector, SystemSpec
from fermat_pdde.corpus import load_corpus
from fermat_pdde.normal_form import verify_system
from fermat_pdde.parser import parse_expr
from fermat_pdde.scalar import PI

for entry in load_corpus():
    rep = entry.verify()
    print(f"{entry.name:24s} {rep.mode:7s} {rep.verdict}")

# replacing z2^2 by z2^3 in the second phase breaks the pair
spec = SystemSpec(2, 2, 2, 2, 2, ShiftVector([2 * PI, 0]))
f1 = parse_expr("sin(z1 + z2 + z2^2)", 2)
f2 = parse_expr("sin(z1 + z2 + z2^3 + pi)", 2)
rep = verify_system(spec, f1, f2)
print("\nperturbed pair:", rep.verdict)
print("surviving term:", rep.witness["exponent"], "coefficient", rep.witness["coefficient"])
print("residual at witness point:", rep.witness["residual"])
