"""The structure maps on a triangle, degree by degree.

Run:  python3 demos/higher_diagonals.py
"""

from einfty import coaction as C
from einfty import simplicial as sc
from einfty.bar import BarElement, bar, unit_bar
from einfty.core import Permutation
from einfty.grammar import format_bar


def show(e, x):
    terms = C.theta(h, e, x).items()
    print(f"{format_bar(e)} on {list(x)}: {len(terms)} terms")
    for t, c in terms:
        print(f"   {c:+d}  " + " (x) ".join(str(list(s)) for s in t))


h = C.CoactionHandle(sc.standard_simplex(2))
tri = (0, 1, 2)
swap = Permutation((2, 1))

show(unit_bar(2), tri)
show(BarElement(swap, ()), tri)
show(bar((1, 2), swap), tri)
show(bar((1, 2), swap, swap), tri)

print("\nchain-map defects on every simplex of the triangle:")
for e in [bar((1, 2), swap), bar((1, 2), swap, swap), bar((1, 2, 3), (2, 3, 1), (3, 2, 1))]:
    bad = sum(1 for x in h.X.simplices if C.chain_map_defect(h, e, x))
    print(f"   {format_bar(e)}: {bad}")

print("\nrelations on the triangle (random sample of 300):")
print(C.check_relations(h, budget=300, seed=1).to_text())
