"""Coalgebra structure maps on normalized chains of ordered complexes.

For a bar element ``e`` of arity n, ``theta(e, x)`` is a tensor chain in
``C(X)^(x)n``.  Values are computed once on the universal simplex
``iota_p = [0..p]`` and transported to any simplex by its characteristic
vertex map.  Degree-0 values are the iterated Alexander-Whitney diagonal;
higher ones come from the acyclic-models recursion

    theta([w], iota_p) = H( theta(d[w], iota_p) + (-1)^m theta([w], d iota_p) )

with H the tensor cone contraction.  Lead coefficients act by permuting
tensor factors: ``theta(s[w]) = s . theta([w])``.
"""

import random
from dataclasses import dataclass, field

from . import simplicial as sc
from . import trees
from .bar import BarElement, bar_boundary, bar_left_multiply, bar_right_action, basis as bar_basis
from .core import Accumulator, FormalSum, Permutation, all_permutations


class ThetaError(RuntimeError):
    pass


class ThetaTable:
    """Memo of universal values ``theta([w], iota_p)`` keyed by ``(word, n, p)``."""

    def __init__(self, check=True):
        self.check = check
        self._memo = {}

    def __len__(self):
        return len(self._memo)

    def planar(self, word, n, p):
        key = (word, n, p)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        top = tuple(range(p + 1))
        m = len(word)
        if m == 0:
            val = sc.aw_iterated(n, top)
        else:
            acc = Accumulator()
            for e, c in bar_boundary(BarElement(Permutation.identity(n), word)).items():
                acc.add(self.universal(e, p), c)
            if p > 0:
                lower = self.planar(word, n, p - 1)
                base = -1 if m % 2 else 1
                for i in range(p + 1):
                    acc.add(sc.push_tensor(sc.face_map(p, i), lower), base * (-1 if i % 2 else 1))
            rhs = acc.result()
            val = sc.tensor_contraction(n, p, rhs)
            if self.check and sc.tensor_boundary(val) != rhs:
                raise ThetaError(f"chain-map identity fails for {word} on Delta^{p}")
        self._memo[key] = val
        return val

    def universal(self, e, p):
        """theta(e, iota_p) for any bar element e."""
        if e.is_degenerate():
            return FormalSum()
        val = self.planar(e.word, e.arity, p)
        if e.lead.is_identity():
            return val
        return sc.permute_factors(e.lead, val)


_DEFAULT = ThetaTable()


def theta_universal(e, p, table=None):
    return (table or _DEFAULT).universal(e, p)


@dataclass
class CoactionHandle:
    """A complex together with the theta table used to evaluate on it."""

    X: sc.ComplexSpec
    table: ThetaTable = field(default_factory=lambda: _DEFAULT)

    def theta(self, e, x):
        return theta(self, e, x)


def _check_simplex(handle, x):
    x = tuple(x)
    if handle is not None and x not in handle.X:
        raise ValueError(f"simplex {list(x)} is not in the complex")
    return x


def theta(handle, e, x):
    """theta(e (x) x) for a bar element and a simplex of the handle's complex."""
    x = _check_simplex(handle, x)
    table = handle.table if handle is not None else _DEFAULT
    u = table.universal(e, len(x) - 1)
    if x == tuple(range(len(x))):
        return u
    return sc.push_tensor(sc.characteristic_map(x), u)


def theta_sum(handle, es, chain):
    """Bilinear extension to a bar sum and a chain."""
    acc = Accumulator()
    for e, a in es.items():
        for x, b in chain.items():
            acc.add(theta(handle, e, x), a * b)
    return acc.result()


# --------------------------------------------------------- operad elements


def _theta_planar(handle, t, x):
    if t[0] == trees.LEAF:
        return FormalSum.basis((x,))
    kids = t[2]
    base = theta(handle, BarElement(Permutation.identity(len(kids)), t[1]), x)
    if all(k[0] == trees.LEAF for k in kids):
        return base
    maps = [(trees.degree(k), lambda s, k=k: _theta_planar(handle, k, s)) for k in kids]
    out = sc.apply_factorwise(maps, base)
    # composite (g_1 (x) ... (x) g_r) o f carries (-1)^{|f| sum |g_j|} so that
    # the boundary follows the tree's depth-first order (root first)
    if len(t[1]) % 2 and sum(m for m, _ in maps) % 2:
        out = -out
    return out


def theta_tree_basis(handle, t, x):
    """theta of a basis tree on a simplex: compose vertex maps, then move factors."""
    x = _check_simplex(handle, x)
    if t[0] == trees.RAW:
        r = trees.canonicalize(t)
        return FormalSum() if r is None else theta_tree_basis(handle, r[1], x) * r[0]
    val = _theta_planar(handle, t, x)
    L = trees.label_permutation(t)
    return val if L.is_identity() else sc.permute_factors(L, val)


def theta_tree(handle, r, chain):
    """theta of an operad element (tree sum) on a chain."""
    acc = Accumulator()
    for t, a in r.items():
        for x, b in chain.items():
            acc.add(theta_tree_basis(handle, t, x), a * b)
    return acc.result()


# ------------------------------------------------------------- relations


@dataclass
class RelationReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name, ok, detail=None):
        n, bad = self.checks.get(name, (0, 0))
        self.checks[name] = (n + 1, bad + (0 if ok else 1))
        if not ok and len(self.failures) < 20:
            self.failures.append({"relation": name, "case": detail})

    @property
    def passed(self):
        return all(bad == 0 for _, bad in self.checks.values()) and bool(self.checks)

    def to_dict(self):
        return {
            "passed": self.passed,
            "relations": {k: {"checked": n, "failed": b} for k, (n, b) in sorted(self.checks.items())},
            "failures": self.failures,
        }

    def to_text(self):
        lines = []
        for k, (n, b) in sorted(self.checks.items()):
            lines.append(f"{k}: {'PASS' if not b else 'FAIL'} ({n} checked, {b} failed)")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def compositions(total, parts):
    """Ordered tuples of positive integers with the given length and sum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def chain_map_defect(handle, e, x):
    """d theta_e(x) - (-1)^m theta_e(dx) - theta_{de}(x); zero when the identity holds."""
    m = e.degree
    lhs = sc.tensor_boundary(theta(handle, e, x))
    dx = sc.simplex_boundary(tuple(x))
    acc = Accumulator()
    acc.add(lhs)
    sign = 1 if m % 2 else -1
    for f, c in dx.items():
        acc.add(theta(handle, e, f), sign * c)
    for f, c in bar_boundary(e).items():
        acc.add(theta(handle, f, x), -c)
    return acc.result()


def aw_composite(ms, x):
    """(AW_{m_1} (x) ... (x) AW_{m_n}) o AW_n applied to a simplex."""
    maps = [(0, lambda s, m=m: sc.aw_iterated(m, s)) for m in ms]
    return sc.apply_factorwise(maps, sc.aw_iterated(len(ms), x))


def check_relations(handle, max_arity=3, max_degree=3, max_total=4, budget=None, seed=0):
    """Check the three coalgebra relations on every simplex of the handle's complex.

    1. theta(s.e) = s . theta(e)   (lead coefficients permute factors)
    2. linearity in e and d theta_e - (-1)^m theta_e d = theta_{de}
    3. (AW_{m1} (x) ... (x) AW_{mn}) AW_n = AW_{m1+...+mn}, also via theta_tree

    With ``budget`` the equivariance, chain-map and linearity cases are a seeded random
    sample of that size; otherwise all cases are enumerated.
    """
    rng = random.Random(seed)
    report = RelationReport()
    simplices = sorted(handle.X.simplices, key=lambda s: (len(s), s))
    elems = []
    for n in range(1, max_arity + 1):
        for m in range(0, max_degree + 1):
            if n == 1 and m:
                continue
            elems.extend(bar_basis(n, m))
    cases = [(e, x) for e in elems for x in simplices]
    if budget is not None and budget < len(cases):
        cases = rng.sample(cases, budget)
    for e, x in cases:
        base = theta(handle, e, x)
        sigmas = all_permutations(e.arity)
        if budget is not None:
            sigmas = [rng.choice(sigmas)]
        for s in sigmas:
            ok = theta(handle, bar_left_multiply(s, e), x) == sc.permute_factors(s, base)
            ok = ok and theta(handle, bar_right_action(e, s), x) == sc.permute_factors(s.inverse(), base)
            report.record("equivariance", ok, {"element": _fmt(e), "sigma": str(s), "simplex": list(x)})
        report.record("chain map", not chain_map_defect(handle, e, x),
                      {"element": _fmt(e), "simplex": list(x)})
        # linearity against a second element of the same arity and degree
        other = rng.choice([f for f in elems if f.arity == e.arity and f.degree == e.degree])
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        combo = FormalSum([(e, a), (other, b)])
        chain = FormalSum.basis(x)
        ok = theta_sum(handle, combo, chain) == base * a + theta(handle, other, x) * b
        report.record("linearity", ok, {"element": _fmt(e), "simplex": list(x)})
    for total in range(1, max_total + 1):
        for n in range(1, total + 1):
            for ms in compositions(total, n):
                for x in simplices:
                    ok = aw_composite(ms, x) == sc.aw_iterated(total, x)
                    raw = _aw_tree(ms)
                    ok = ok and theta_tree_basis(handle, raw, x) == sc.aw_iterated(total, x)
                    report.record("composition of diagonals", ok, {"m": list(ms), "simplex": list(x)})
    return report


def _aw_tree(ms):
    """Raw tree gamma([ ]_n; [ ]_{m_1}, ..., [ ]_{m_n}) with planar labels."""
    n = len(ms)
    kids = []
    nxt = 1
    for m in ms:
        if m == 1:
            kids.append(trees.leaf(nxt))
        else:
            kids.append((trees.NODE, (), tuple(trees.leaf(nxt + i) for i in range(m))))
        nxt += m
    if n == 1:
        return kids[0]
    return (trees.NODE, (), tuple(kids))


def _fmt(e):
    from .grammar import format_bar

    return format_bar(e)


# ------------------------------------------------------------ naturality


def random_monotone_map(rng, X, Y):
    """Random vertex-monotone simplicial map X -> Y, or None if none was found.

    Candidate maps send the vertices of X monotonically onto the vertices
    of a random simplex of Y; maps from a simplex are always simplicial.
    """
    vx = X.vertices
    for _ in range(200):
        target = rng.choice(sorted(Y.simplices))
        cuts = sorted(rng.choice(range(len(target))) for _ in vx)
        f = {v: target[c] for v, c in zip(vx, cuts)}
        if sc.is_simplicial(f, X, Y):
            return f
    return None


def naturality_defect(X, Y, f, e, x, table=None):
    """f_* theta_X(e, x) - theta_Y(e, f_* x)."""
    hx = CoactionHandle(X, table or _DEFAULT)
    hy = CoactionHandle(Y, table or _DEFAULT)
    lhs = sc.push_tensor(f, theta(hx, e, x))
    img = sc.push_simplex(f, tuple(x))
    rhs = FormalSum() if img is None else theta(hy, e, img)
    return lhs - rhs


# --------------------------------------------------------- cup products


def cup_i_element(i):
    """The arity-2 bar element [t/t/.../t] (i letters) giving the cup-i product."""
    t = Permutation((2, 1))
    return BarElement(Permutation.identity(2), (t,) * i)


def pull_back(handle, e, cochains):
    """Cochain x -> (a_1 (x) ... (x) a_n)(theta(e, x)), without Koszul signs."""
    degs = []
    for a in cochains:
        degs.append(len(next(iter(a))) - 1 if a else None)
    if any(d is None for d in degs):
        return {}
    k = sum(degs) - e.degree
    out = {}
    if k < 0:
        return out
    for s in handle.X.by_dim(k):
        v = 0
        for t, c in theta(handle, e, s).items():
            term = c
            for a, u in zip(cochains, t):
                term *= a.get(u, 0)
                if not term:
                    break
            v += term
        if v:
            out[s] = v
    return out


def cup(handle, a, b):
    return pull_back(handle, cup_i_element(0), [a, b])


def cup_i(handle, i, a, b):
    return pull_back(handle, cup_i_element(i), [a, b])


def cup_one_witness(handle, a, b):
    """w with delta w = a u b - (-1)^(|a||b|) b u a on cocycles a, b."""
    return {s: -v for s, v in cup_i(handle, 1, a, b).items()}


def cochain_sub(a, b, coeff=1):
    out = dict(a)
    for s, v in b.items():
        out[s] = out.get(s, 0) - coeff * v
        if not out[s]:
            del out[s]
    return out


def cup_product_table(X, k, l, handle=None):
    """Products of the generators of H^k and H^l in the generator basis of H^{k+l}.

    Returns a dict with the group descriptions and entries
    ``{"left": name, "right": name, "free": [...], "torsion": [...]}``.
    """
    handle = handle or CoactionHandle(X)
    groups = sc.cohomology_ring_input(X)
    out = {"k": k, "l": l, "entries": []}
    if k + l > X.dim:
        out["H"] = {}
        return out
    hk, hl, hkl = groups[k], groups[l], groups[k + l]
    out["H"] = {str(k): hk.describe(), str(l): hl.describe(), str(k + l): hkl.describe()}
    gk = _named(hk, k)
    gl = _named(hl, l)
    for na, a in gk:
        for nb, b in gl:
            prod_ = cup(handle, a, b)
            free, tors = hkl.coordinates(prod_)
            out["entries"].append({"left": na, "right": nb, "free": free, "torsion": tors})
    return out


def _named(group, k):
    out = [(f"a{k}_{i + 1}", z) for i, z in enumerate(group.free)]
    out += [(f"t{k}_{i + 1}", z) for i, z in enumerate(group.torsion)]
    return out


# ------------------------------------------------------------------ mod 2


def mod2(a):
    return {s: 1 for s, v in a.items() if v % 2}


def mod2_generators(X, k):
    """Mod-2 k-cocycles whose classes form a basis of H^k(X; Z/2)."""
    basis = X.by_dim(k)
    rows = [[sc.evaluate({s: 1}, sc.simplex_boundary(t)) for s in basis] for t in X.by_dim(k + 1)]
    # coboundaries of the (k-1)-simplices span the classes already accounted for
    span = []
    if k:
        for f in X.by_dim(k - 1):
            d = sc.coboundary(X, {f: 1})
            span.append([d.get(s, 0) % 2 for s in basis])
    rank = sc.gf2_rank(span)
    out = []
    for v in sc.gf2_nullspace(rows, len(basis)):
        grown = sc.gf2_rank(span + [v])
        if grown > rank:
            span.append(v)
            rank = grown
            out.append({s: 1 for s, b in zip(basis, v) if b})
    return out


def _xor(a, b):
    return {s: 1 for s in set(a) ^ set(b)}


def bockstein(X, a):
    """Mod-2 Bockstein of a mod-2 cocycle: (delta of a 0/1 lift) / 2."""
    d = sc.coboundary(X, mod2(a))
    if any(v % 2 for v in d.values()):
        raise ValueError("not a mod-2 cocycle")
    return mod2({s: v // 2 for s, v in d.items()})
