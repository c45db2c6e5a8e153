"""Tabulate the classifier over exponents 1..4."""
import itertools
from collections import Counter

from fermat_pdde.families import classify

counts = Counter()
for q in itertools.product(range(1, 5), repeat=4):
    v = classify(*q)
    counts[str(v)] += 1
    if v.tag in ("SineFamily", "QuadraticFamily", "Unknown"):
        print(q, v)
print()
for verdict, n in sorted(counts.items()):
    print(f"{verdict:22s} {n}")
