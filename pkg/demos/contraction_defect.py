"""Where the contracting homotopy of R works, and where it cannot.

Run:  python3 demos/contraction_defect.py
"""

from einfty import quotient as Q
from einfty.bar import bar
from einfty.core import FormalSum
from einfty.grammar import format_sum, format_tree, parse_tree
from einfty.trees import corolla


def show(text):
    ((t, _),) = parse_tree(text).items()
    print("element   ", format_tree(t))
    print("phi       ", format_sum(Q.phi_tree(t)))
    print("literal   ", format_sum(Q.contraction_residual(t, complete=False)))
    print("completed ", format_sum(Q.contraction_residual(t)))
    print()


print("Residual of d phi + phi d - (id - eta eps) on a few trees of R(3).\n")

# A degree-0 root over a positive-degree subtree: without the extra term the
# residual is minus the tree itself; the completion repairs it.
show("([]2 ; #1 , [(2 1)/(2 1)]2)")

# Same shape, subtree of degree 1: no choice of phi can help here.
show("([]2 ; #1 , [(2 1)]2)")

# The reason is a genuine cycle that bounds nothing.
((t, _),) = parse_tree("([]2 ; #1 , [(2 1)]2)").items()
cycle = FormalSum.basis(t) - FormalSum.basis(corolla(bar((1, 2, 3), (1, 3, 2)))[1])
print("cycle     ", format_sum(cycle))
print("boundary  ", format_sum(Q.r_boundary(cycle)))
h = Q.r_homology(3, 1)
print("H_0(R(3)) = Z^%d, H_1(R(3)) = Z^%d" % (h[0][0], h[1][0]))
print()

report = Q.verify_einfty(3, 3)
print(report.to_text())
