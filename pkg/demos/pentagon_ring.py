"""Koszul cohomology ring of the pentagon, generator by generator.

Run: python3 demos/pentagon_ring.py
"""

from torcomb.families import PolygonPresentation
from torcomb.ring import product_table, theorem_conformance

p = PolygonPresentation((1, 1, 1, 1, 1))
table = product_table(p)
for g in table.generators:
    print(f"{g.name:>3}  bidegree {g.bidegree}  {g.element.describe()}")
print()
for key, val in sorted(table.products.items()):
    if val:
        rhs = " + ".join(f"{c:+d} {g}" for c, g in val)
        print(f"{'*'.join(key)} = {rhs}")
conf = theorem_conformance(p, table)
print(f"\nmatches the expected table: {conf.ok}, additive rank {conf.rank}")
