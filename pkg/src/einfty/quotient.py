"""The quotient operad R = F(S)/J and its contracting homotopy.

J is generated by degree-0 differences ``x - y`` with ``pi0(x) == pi0(y)``.
On canonical trees (identity leads everywhere) two adjacent degree-0
vertices compose to the identity permutation, so the normal form just
splices the child's inputs into the parent.  Normal-form trees, with no edge
joining two degree-0 vertices, form a basis of R.
"""

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from . import snf
from . import trees as T
from .bar import BarElement, bar_contraction
from .core import Accumulator, FormalSum, Permutation, all_permutations, koszul_sign
from .grammar import format_sum, format_tree
from .trees import LEAF, NODE, RAW


def _is_deg0_vertex(t):
    return t[0] == NODE and not t[1]


@lru_cache(maxsize=1 << 18)
def normal_form(t):
    """Contract every edge between two degree-0 vertices (bottom-up, one pass)."""
    if t[0] == LEAF:
        return t
    kids = [normal_form(c) for c in t[2]]
    if t[1]:
        return (NODE, t[1], tuple(kids))
    spliced = []
    for c in kids:
        if _is_deg0_vertex(c):
            spliced.extend(c[2])
        else:
            spliced.append(c)
    return (NODE, (), tuple(spliced))


def is_normal(t):
    return normal_form(t) == t


def normalize(x):
    return x.map_keys(lambda t: (1, normal_form(t)))


def redexes(t, path=()):
    """Paths ``(parent_path, child_index)`` of contractible edges."""
    out = []
    if t[0] == LEAF:
        return out
    for i, c in enumerate(t[2]):
        if _is_deg0_vertex(t) and _is_deg0_vertex(c):
            out.append((path, i))
        out.extend(redexes(c, path + (i,)))
    return out


def contract_at(t, path, i):
    """Contract the single edge from the vertex at ``path`` to its child i."""
    if path:
        kids = list(t[2])
        kids[path[0]] = contract_at(kids[path[0]], path[1:], i)
        return (NODE, t[1], tuple(kids))
    c = t[2][i]
    if not (_is_deg0_vertex(t) and _is_deg0_vertex(c)):
        raise ValueError("not a redex")
    return (NODE, (), t[2][:i] + c[2] + t[2][i + 1:])


def random_order_normal_form(t, rng):
    while True:
        rs = redexes(t)
        if not rs:
            return t
        path, i = rng.choice(rs)
        t = contract_at(t, path, i)


def r_gamma(x, ys):
    return normalize(T.gamma(x, ys))


def r_boundary(x):
    return normalize(T.boundary(x))


def r_tree_boundary(t):
    return normalize(T.tree_boundary(t))


def r_act(x, sigma):
    # relabelling never creates or removes degree-0 edges
    return T.act(x, sigma)


def augmentation(x):
    """epsilon on R(n): every degree-0 basis tree maps to 1."""
    return sum(c for t, c in x.items() if T.degree(t) == 0)


def unit_tree(n):
    """eta(1): the identity-labelled degree-0 corolla (the leaf when n = 1)."""
    if n == 1:
        return T.UNIT
    return (NODE, (), tuple(T.leaf(i) for i in range(1, n + 1)))


def _unit_on(labels_):
    ls = sorted(labels_)
    if len(ls) == 1:
        return T.leaf(ls[0])
    return (NODE, (), tuple(T.leaf(k) for k in ls))


def eta_epsilon_tree(t):
    if T.degree(t):
        return FormalSum()
    return FormalSum.basis(_unit_on(T.labels(t)))


def root_decomposition(t):
    """Write a normal tree as ``sign * gamma(lead[w]; children sorted by min label)``.

    Returns ``(sign, lead, word, sorted_children)``.
    """
    kids = t[2]
    order = sorted(range(len(kids)), key=lambda i: T.min_label(kids[i]))
    sorted_kids = [kids[i] for i in order]
    # raw child j (sorted) sits at planar slot order[j]+1 = lead**-1(j+1)
    dest = Permutation([i + 1 for i in order])
    lead = dest.inverse()
    sign = koszul_sign([T.degree(c) for c in sorted_kids], dest)
    return sign, lead, t[1], sorted_kids


def _assemble(lead, word, kids):
    """Canonical tree for ``gamma(lead[word]; kids)`` with global labels (sign, key)."""
    return T.canonicalize((RAW, lead, word, tuple(kids)))


def phi_tree(t, complete=True):
    """Contracting homotopy on a normal-form basis tree.

    Root decoration ``x0`` and subtrees ``y`` (ordered by least leaf label):
    ``phi = gamma(psi x0; y)`` and, when ``complete`` and ``x0`` has degree 0,
    the extra term ``gamma(eta eps x0; H(y))`` with H the tensor contraction
    built from phi on the subtrees.
    """
    if t[0] == LEAF:
        return FormalSum()
    sign, lead, word, kids = root_decomposition(t)
    acc = Accumulator()
    for e, c in bar_contraction(BarElement(lead, word)).items():
        r = _assemble(e.lead, e.word, kids)
        if r:
            acc.add_term(normal_form(r[1]), sign * c * r[0])
    if complete and not word:
        r = len(kids)
        ident = Permutation.identity(r)
        for j in range(r):
            head = []
            ok = True
            for c in kids[:j]:
                if T.degree(c):
                    ok = False
                    break
                head.append(_unit_on(T.labels(c)))
            if not ok:
                break
            # phi passes the degree-0 factors before it: no Koszul sign
            for z, zc in phi_tree(kids[j]).items():
                res = _assemble(ident, (), head + [z] + list(kids[j + 1:]))
                if res:
                    acc.add_term(normal_form(res[1]), sign * zc * res[0])
    return acc.result()


def phi(x, complete=True):
    if x.degree(T.degree) == "mixed":
        raise ValueError("phi needs a homogeneous element")
    acc = Accumulator()
    for t, c in x.items():
        acc.add(phi_tree(t, complete), c)
    return acc.result()


def contraction_residual(t, complete=True):
    """``(d Phi + Phi d - id + eta eps)(t)``; zero exactly when the identity holds."""
    x = FormalSum.basis(t)
    lhs = r_boundary(phi(x, complete)) + phi(r_boundary(x), complete)
    return lhs - x + eta_epsilon_tree(t)


def r_basis(n, d):
    """Normal-form basis of R(n) in degree d, sorted."""
    return [t for t in T.enumerate_basis(n, d) if is_normal(t)]


def r_basis_degree0_count(n):
    """Number of distinct normal forms among all degree-0 trees of F(S)(n)."""
    return len({normal_form(t) for t in T.enumerate_basis(n, 0)})


def random_normal_tree(rng, n, d, tries=200):
    for _ in range(tries):
        t = normal_form(T.random_tree(rng, n, d))
        if T.degree(t) == d:
            return t
    raise RuntimeError("could not sample a normal tree")


def boundary_matrix(n, d, bases=None):
    """Matrix of R(n)_d -> R(n)_{d-1} in the sorted normal bases."""
    src = bases[d] if bases else r_basis(n, d)
    tgt = bases[d - 1] if bases else r_basis(n, d - 1)
    index = {t: i for i, t in enumerate(tgt)}
    M = snf.zeros(len(tgt), len(src))
    for j, t in enumerate(src):
        for s, c in r_tree_boundary(t).items():
            M[index[s]][j] += c
    return M


def r_homology(n, top):
    """Integer homology of R(n) in degrees 0..top (needs the basis up to top+1)."""
    bases = {d: r_basis(n, d) for d in range(top + 2)}
    dims = [len(bases[d]) for d in range(top + 2)]
    mats = [None] + [boundary_matrix(n, d, bases) for d in range(1, top + 2)]
    h = snf.homology_from_boundaries(mats, dims)
    return {d: h[d] for d in range(top + 1)}


@dataclass
class Cell:
    arity: int
    degree: int
    mode: str
    checked: int
    basis_size: int
    residual_failures: int
    literal_failures: int
    free: bool
    first_failure: str = ""

    @property
    def passed(self):
        return self.residual_failures == 0 and self.free


@dataclass
class EinftyReport:
    cells: list = field(default_factory=list)
    degree0_counts: dict = field(default_factory=dict)
    homology: dict = field(default_factory=dict)

    @property
    def passed(self):
        counts_ok = all(v == factorial(n) for n, v in self.degree0_counts.items())
        homology_ok = all(
            (betti, tors) == ((1, []) if d == 0 else (0, []))
            for n, hs in self.homology.items()
            for d, (betti, tors) in hs.items()
        )
        return counts_ok and homology_ok and all(c.passed for c in self.cells)

    def to_dict(self):
        return {
            "passed": self.passed,
            "degree0_counts": {str(n): v for n, v in sorted(self.degree0_counts.items())},
            "homology": {
                str(n): {str(d): {"betti": b, "torsion": t} for d, (b, t) in sorted(hs.items())}
                for n, hs in sorted(self.homology.items())
            },
            "cells": [
                {
                    "arity": c.arity,
                    "degree": c.degree,
                    "mode": c.mode,
                    "checked": c.checked,
                    "basis_size": c.basis_size,
                    "residual_failures": c.residual_failures,
                    "literal_formula_failures": c.literal_failures,
                    "free": c.free,
                    "passed": c.passed,
                    "first_failure": c.first_failure,
                }
                for c in self.cells
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self):
        lines = []
        for c in self.cells:
            status = "PASS" if c.passed else "FAIL"
            seen = f"{c.checked}/{c.basis_size} checked" if c.basis_size >= 0 else f"{c.checked} sampled"
            lines.append(
                f"R({c.arity}) degree {c.degree}: {status} [{c.mode}, {seen}, "
                f"{c.residual_failures} residual failures, literal formula {c.literal_failures}, "
                f"free={c.free}]"
            )
        for n, v in sorted(self.degree0_counts.items()):
            ok = "PASS" if v == factorial(n) else "FAIL"
            lines.append(f"R({n})_0 basis count: {v} (expected {factorial(n)}) {ok}")
        for n, hs in sorted(self.homology.items()):
            for d, (b, t) in sorted(hs.items()):
                want = (1, []) if d == 0 else (0, [])
                ok = "PASS" if (b, t) == want else "FAIL"
                tors = "".join(f" + Z/{k}" for k in t)
                lines.append(f"H_{d}(R({n})) = Z^{b}{tors} {ok}")
        lines.append("OVERALL: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


EXHAUSTIVE_ARITY = 3
EXHAUSTIVE_LIMIT = {4: 3}


def exhaustive_ok(n, d):
    """Cells small enough for a full sweep (R(4)_3 has 311688 basis trees)."""
    return n <= EXHAUSTIVE_ARITY or d <= EXHAUSTIVE_LIMIT.get(n, -1)


def verify_einfty(n_max, d_max, samples=None, seed=0, homology_arity=None):
    """Check the contraction identity, freeness and degree-0 counts.

    Arity <= 3 is always swept exhaustively.  Larger arities are sampled
    when ``samples`` is given (that many random normal-form trees per
    degree, drawn from ``seed``) and swept exhaustively otherwise, which is
    only allowed for cells accepted by ``exhaustive_ok``.
    ``homology_arity`` adds an SNF computation of H_*(R(n)) up to
    ``d_max - 1`` for every n up to it.
    """
    for n in range(EXHAUSTIVE_ARITY + 1, n_max + 1):
        for d in range(d_max + 1):
            if not samples and not exhaustive_ok(n, d):
                raise ValueError(f"R({n}) in degree {d} is too large for an exhaustive sweep; give samples")
    rng = random.Random(seed)
    report = EinftyReport()
    for n in range(1, n_max + 1):
        perms = all_permutations(n)
        for d in range(d_max + 1):
            if n == 1 and d > 0:
                report.cells.append(Cell(n, d, "exhaustive", 0, 0, 0, 0, True))
                continue
            if n <= EXHAUSTIVE_ARITY or not samples:
                items = r_basis(n, d)
                mode = "exhaustive"
                size = len(items)
            else:
                items = [random_normal_tree(rng, n, d) for _ in range(samples)]
                mode = f"random[{samples}]"
                size = -1
            fails = 0
            lit_fails = 0
            first = ""
            free = True
            for t in items:
                res = contraction_residual(t)
                if res:
                    fails += 1
                    if not first:
                        first = f"{format_tree(t)}: residual {format_sum(res)}"
                if contraction_residual(t, complete=False):
                    lit_fails += 1
                for s in perms:
                    if not s.is_identity() and T.leaf_action(t, s) == t:
                        free = False
            report.cells.append(Cell(n, d, mode, len(items), size, fails, lit_fails, free, first))
        report.degree0_counts[n] = r_basis_degree0_count(n) if n <= 5 else None
    if homology_arity:
        for n in range(2, min(homology_arity, n_max) + 1):
            report.homology[n] = r_homology(n, max(d_max - 1, 0))
    return report
