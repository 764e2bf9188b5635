"""Cup products and their first homotopy, read off the structure maps.

Run:  python3 demos/cup_products.py
"""

from einfty import coaction as C
from einfty import simplicial as sc

torus = sc.load_fixture("torus")
print("torus:", {k: g.describe() for k, g in sc.cohomology_ring_input(torus).items()})
table = C.cup_product_table(torus, 1, 1)
for e in table["entries"]:
    print(f"  {e['left']} u {e['right']} = {e['free'][0]} * a2_1")

# theta([(2 1)]) gives a cochain whose coboundary is the commutator
h = C.CoactionHandle(torus)
alpha, beta = sc.CohomologyGroup(torus, 1).free
w = C.cup_one_witness(h, alpha, beta)
lhs = sc.coboundary(torus, w)
rhs = C.cochain_sub(C.cup(h, alpha, beta), C.cup(h, beta, alpha), -1)
print("  delta(w) == a u b + b u a:", lhs == rhs, f"({len(w)} edges in w)")

rp2 = sc.load_fixture("rp2")
print("\nrp2:", {k: g.describe() for k, g in sc.cohomology_ring_input(rp2).items()})
h = C.CoactionHandle(rp2)
(a,) = C.mod2_generators(rp2, 1)
(b,) = C.mod2_generators(rp2, 2)


def cls(z):
    z = C.mod2(z)
    return "0" if sc.is_coboundary_mod2(rp2, z) else "nonzero"


print("  a u a          :", cls(C.cup(h, a, a)))
print("  Bockstein(a)   :", cls(C.bockstein(rp2, a)))
print("  a u a + Bock(a):", cls(C._xor(C.mod2(C.cup(h, a, a)), C.bockstein(rp2, a))))
print("  a u_1 a + a    :", cls(C._xor(C.mod2(C.cup_i(h, 1, a, a)), a)))
print("  b u_2 b + b    :", cls(C._xor(C.mod2(C.cup_i(h, 2, b, b)), b)))
