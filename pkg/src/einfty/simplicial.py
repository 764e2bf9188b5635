"""Ordered simplicial complexes and their normalized integer chains.

Simplices are sorted vertex tuples; a chain is a FormalSum over simplices and
a tensor chain a FormalSum over tuples of simplices.  Vertex maps are applied
to simplices by taking images and dropping the result when two vertices
collide (degenerate simplices are zero in normalized chains).
"""

import json
from functools import lru_cache
from importlib import resources
from itertools import combinations, combinations_with_replacement

from . import snf
from .core import Accumulator, FormalSum, koszul_sign


class ComplexSpec:
    """Finite ordered simplicial complex, closed under faces."""

    def __init__(self, simplices, vertices=None):
        closed = set()
        for s in simplices:
            s = tuple(sorted(s))
            if not s:
                continue
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        if vertices is not None:
            for v in vertices:
                closed.add((v,))
        self.simplices = frozenset(closed)
        self.vertices = tuple(sorted(v for (v,) in (s for s in closed if len(s) == 1)))
        self.dim = max((len(s) - 1 for s in closed), default=-1)

    def __contains__(self, s):
        return tuple(s) in self.simplices

    def __eq__(self, other):
        return isinstance(other, ComplexSpec) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"ComplexSpec({len(self.vertices)} vertices, dim {self.dim})"

    def by_dim(self, k):
        return sorted(s for s in self.simplices if len(s) == k + 1)

    def facets(self):
        out = []
        for s in sorted(self.simplices, key=lambda s: (-len(s), s)):
            if not any(set(s) < set(f) for f in out):
                out.append(s)
        return sorted(out)

    def to_dict(self):
        return {"vertices": list(self.vertices), "simplices": [list(s) for s in self.facets()]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(d.get("simplices", []), d.get("vertices"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def standard_simplex(p):
    return ComplexSpec([tuple(range(p + 1))])


def simplex_boundary_complex(p):
    """The boundary of the (p+1)-simplex: a p-sphere."""
    top = tuple(range(p + 2))
    return ComplexSpec([f for f in combinations(top, p + 1)])


FIXTURES = ("delta0", "delta1", "delta2", "delta3", "sphere2", "torus", "rp2")


def load_fixture(name):
    """Bundled complexes: delta0..delta3, sphere2 (boundary of delta3), torus, rp2."""
    data = resources.files("einfty").joinpath("data").joinpath(f"{name}.json").read_text()
    return ComplexSpec.from_json(data)


def load_complex(path_or_name):
    if path_or_name in FIXTURES:
        return load_fixture(path_or_name)
    with open(path_or_name) as fh:
        return ComplexSpec.from_json(fh.read())


def dim(s):
    return len(s) - 1


# ---------------------------------------------------------------- chains


@lru_cache(maxsize=None)
def simplex_boundary(s):
    if len(s) <= 1:
        return FormalSum()
    return FormalSum([(s[:i] + s[i + 1:], -1 if i % 2 else 1) for i in range(len(s))])


def chain_boundary(c):
    return c.map(simplex_boundary)


def tensor_degree(t):
    return sum(len(s) - 1 for s in t)


def tensor_boundary_basis(t):
    acc = Accumulator()
    pre = 0
    for i, s in enumerate(t):
        if len(s) > 1:
            sign = -1 if pre % 2 else 1
            for f, c in simplex_boundary(s).items():
                acc.add_term(t[:i] + (f,) + t[i + 1:], sign * c)
        pre += len(s) - 1
    return acc.result()


def tensor_boundary(x):
    return x.map(tensor_boundary_basis)


def tensor(*chains):
    """Tensor product of chains (or tensor chains), flattened."""
    acc = {(): 1}
    for c in chains:
        nxt = Accumulator()
        for k, a in acc.items():
            for s, b in c.items():
                part = s if isinstance(s[0], tuple) else (s,)
                nxt.add_term(k + part, a * b)
        acc = nxt.d
    return FormalSum(acc)


def permute_factors(sigma, x):
    """Left action on tensor factors: the factor in slot i moves to slot sigma(i)."""
    inv = sigma.inverse()

    def f(t):
        if len(t) != len(sigma):
            raise ValueError("arity mismatch")
        sign = koszul_sign([len(s) - 1 for s in t], sigma)
        return sign, tuple(t[inv[k] - 1] for k in range(len(t)))

    return x.map_keys(f)


# ------------------------------------------------------ Alexander-Whitney


@lru_cache(maxsize=None)
def _aw_cached(n, s):
    p = len(s) - 1
    if n == 1:
        return FormalSum.basis((s,))
    acc = Accumulator()
    for cuts in combinations_with_replacement(range(p + 1), n - 1):
        bounds = (0,) + cuts + (p,)
        acc.add_term(tuple(s[bounds[i]: bounds[i + 1] + 1] for i in range(n)), 1)
    return acc.result()


def aw_iterated(n, s):
    """Iterated Alexander-Whitney diagonal of a simplex into n tensor factors."""
    if n < 1:
        raise ValueError("need n >= 1")
    return _aw_cached(n, tuple(s))


def aw_chain(n, c):
    return c.map(lambda s: aw_iterated(n, s))


def apply_factorwise(maps, x):
    """``(f_1 (x) ... (x) f_r)`` on tensor chains with Koszul signs.

    ``maps`` is a list of ``(degree, f)`` where ``f`` sends a simplex to a
    tensor chain.
    """
    acc = Accumulator()
    for t, c in x.items():
        if len(t) != len(maps):
            raise ValueError("arity mismatch")
        sign = 1
        pre = 0
        for (deg, _), s in zip(maps, t):
            if deg % 2 and pre % 2:
                sign = -sign
            pre += len(s) - 1
        parts = [f(s) for (_, f), s in zip(maps, t)]
        if any(not p for p in parts):
            continue
        prod = {(): sign * c}
        for p in parts:
            nxt = {}
            for k, a in prod.items():
                for u, b in p.items():
                    key = k + u
                    v = nxt.get(key, 0) + a * b
                    if v:
                        nxt[key] = v
                    else:
                        nxt.pop(key, None)
            prod = nxt
        for k, a in prod.items():
            acc.add_term(k, a)
    return acc.result()


# ------------------------------------------------------------ vertex maps


def push_simplex(f, s):
    img = tuple(f[v] for v in s)
    if len(set(img)) != len(img):
        return None
    if list(img) != sorted(img):
        raise ValueError("vertex map is not monotone on this simplex")
    return img


def push_chain(f, c):
    return c.map_keys(lambda s: (lambda im: None if im is None else (1, im))(push_simplex(f, s)))


def push_tensor(f, x):
    def g(t):
        out = []
        for s in t:
            im = push_simplex(f, s)
            if im is None:
                return None
            out.append(im)
        return 1, tuple(out)

    return x.map_keys(g)


def characteristic_map(s):
    """Vertex map Delta^p -> X sending i to the i-th vertex of s."""
    return dict(enumerate(s))


def face_map(p, i):
    """Coface inclusion Delta^(p-1) -> Delta^p skipping vertex i."""
    return {j: (j if j < i else j + 1) for j in range(p)}


def is_simplicial(f, X, Y):
    for s in X.simplices:
        img = tuple(sorted(set(f[v] for v in s)))
        if img not in Y.simplices:
            return False
    return True


def is_monotone(f, X):
    vs = X.vertices
    return all(f[a] <= f[b] for a, b in zip(vs, vs[1:]))


# ------------------------------------------------------- contractions


def cone_contraction_simplex(s):
    if s[0] == 0:
        return FormalSum()
    return FormalSum.basis((0,) + s)


def cone_contraction(p, c):
    """h([i0..ik]) = [0 i0 .. ik] unless i0 = 0; chains on Delta^p only."""
    for s, _ in c.items():
        if s[-1] > p or s[0] < 0:
            raise ValueError(f"simplex {s} is not in Delta^{p}")
    return c.map(cone_contraction_simplex)


def augmentation(c):
    return sum(v for s, v in c.items() if len(s) == 1)


def tensor_contraction_basis(t):
    acc = Accumulator()
    pre = 0
    for j, s in enumerate(t):
        # factors before j go through eta*eps: vertices become [0], others vanish
        if j and len(t[j - 1]) != 1:
            break
        if s[0] != 0:
            sign = -1 if pre % 2 else 1
            acc.add_term(tuple((0,) for _ in range(j)) + ((0,) + s,) + t[j + 1:], sign)
        pre += len(s) - 1
    return acc.result()


def tensor_contraction(n, p, x):
    """H = sum_j (eta eps)^(j-1) (x) h (x) id^(n-j) on (Delta^p)^(x)n."""
    for t, _ in x.items():
        if len(t) != n:
            raise ValueError("arity mismatch")
        for s in t:
            if s[-1] > p:
                raise ValueError(f"simplex {s} is not in Delta^{p}")
    return x.map(tensor_contraction_basis)


def tensor_eta_epsilon(x):
    total = sum(c for t, c in x.items() if all(len(s) == 1 for s in t))
    if not total or not x:
        return FormalSum()
    n = len(next(iter(x.keys())))
    return FormalSum.basis(tuple((0,) for _ in range(n)), total)


# ------------------------------------------------------------ (co)homology


def boundary_matrix(X, k):
    """Matrix of C_k -> C_{k-1} in the sorted simplex bases."""
    rows = X.by_dim(k - 1)
    cols = X.by_dim(k)
    index = {s: i for i, s in enumerate(rows)}
    M = snf.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        for f, c in simplex_boundary(s).items():
            M[index[f]][j] = c
    return M


def homology(X):
    """``{k: (betti, torsion)}`` for k = 0..dim X."""
    dims = [len(X.by_dim(k)) for k in range(X.dim + 1)]
    mats = [None] + [boundary_matrix(X, k) for k in range(1, X.dim + 1)]
    return snf.homology_from_boundaries(mats, dims)


class CohomologyGroup:
    """H^k(X; Z) with explicit cocycle representatives.

    ``free`` and ``torsion`` hold cochains (dicts simplex -> int); ``orders``
    the torsion orders.  ``coordinates(z)`` returns the class of a cocycle as
    ``(free_coords, torsion_coords)``.
    """

    def __init__(self, X, k):
        self.X, self.k = X, k
        self.basis = X.by_dim(k)
        nk = len(self.basis)
        prev = X.by_dim(k - 1) if k > 0 else []
        nxt = X.by_dim(k + 1)
        # delta^k = transpose of d_{k+1}
        dk = snf.transpose(boundary_matrix(X, k + 1), nk) if nxt else []
        if dk:
            D, U, V = snf.smith_normal_form(dk, nk)
            r = sum(1 for d in snf.diagonal(D) if d)
        else:
            V, r = snf.identity(nk), 0
        self._V = V
        self._Vinv = snf.inverse_unimodular(V) if nk else []
        self._r = r
        z = nk - r
        K = [row[r:] for row in V]
        if k > 0 and prev:
            dprev = snf.transpose(boundary_matrix(X, k), len(prev))
            M = [row for row in snf.matmul(self._Vinv, dprev)[r:]]
        else:
            M = [[] for _ in range(z)]
        ncols = len(prev) if k > 0 else 0
        if z and ncols:
            D2, U2, _ = snf.smith_normal_form(M, ncols)
            diag = snf.diagonal(D2)
        else:
            U2, diag = snf.identity(z), []
        self._U2 = U2
        diag = diag + [0] * (z - len(diag))
        self._diag = diag
        gens = snf.matmul(K, snf.inverse_unimodular(U2)) if z else []
        cols = list(zip(*gens)) if z else []
        self.free, self.torsion, self.orders = [], [], []
        self._free_idx, self._tors_idx = [], []
        for i in range(z):
            cochain = {s: v for s, v in zip(self.basis, cols[i]) if v}
            if diag[i] == 0:
                self.free.append(cochain)
                self._free_idx.append(i)
            elif diag[i] > 1:
                self.torsion.append(cochain)
                self.orders.append(diag[i])
                self._tors_idx.append(i)

    @property
    def rank(self):
        return len(self.free)

    def is_cocycle(self, z):
        return not coboundary(self.X, z)

    def coordinates(self, z):
        """Class of a cocycle in the (free, torsion) generator basis."""
        if not self.is_cocycle(z):
            raise ValueError("not a cocycle")
        vec = [z.get(s, 0) for s in self.basis]
        c = [sum(a * b for a, b in zip(row, vec)) for row in self._Vinv][self._r:]
        c2 = [sum(a * b for a, b in zip(row, c)) for row in self._U2]
        free = [c2[i] for i in self._free_idx]
        tors = [c2[i] % self._diag[i] for i in self._tors_idx]
        return free, tors

    def describe(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{o}" for o in self.orders]
        return " + ".join(parts) if parts else "0"


def cohomology_ring_input(X):
    """Cohomology groups of X in every degree, with representative cocycles."""
    return {k: CohomologyGroup(X, k) for k in range(X.dim + 1)}


def evaluate(cochain, chain):
    return sum(c * cochain.get(s, 0) for s, c in chain.items())


def coboundary(X, a):
    """(delta a)(x) = a(dx), as a dict on simplices one dimension up."""
    if not a:
        return {}
    k = len(next(iter(a))) - 1
    out = {}
    for s in X.by_dim(k + 1):
        v = evaluate(a, simplex_boundary(s))
        if v:
            out[s] = v
    return out


# ---------------------------------------------------------------- mod 2


def gf2_rank(rows):
    """Rank over GF(2) of a list of 0/1 integer rows (bitmask elimination)."""
    basis = []
    for row in rows:
        v = 0
        for i, b in enumerate(row):
            if b % 2:
                v |= 1 << i
        for bv in basis:
            v = min(v, v ^ bv)
        if v:
            basis.append(v)
    return len(basis)


def is_coboundary_mod2(X, z):
    """Whether the mod-2 cochain z is delta of some mod-2 cochain."""
    if not z:
        return True
    k = len(next(iter(z))) - 1
    if k == 0:
        return not any(v % 2 for v in z.values())
    prev = X.by_dim(k - 1)
    basis = X.by_dim(k)
    cols = [[evaluate({p: 1}, simplex_boundary(s)) % 2 for s in basis] for p in prev]
    target = [z.get(s, 0) % 2 for s in basis]
    return gf2_rank(cols) == gf2_rank(cols + [target])


def is_cocycle_mod2(X, z):
    return all(v % 2 == 0 for v in coboundary(X, z).values())


def gf2_nullspace(rows, ncols):
    """Basis of {v : rows . v = 0 mod 2}, as 0/1 lists of length ncols."""
    pivots = {}
    for row in rows:
        v = 0
        for i, b in enumerate(row):
            if b % 2:
                v |= 1 << i
        for col, pv in pivots.items():
            if v >> col & 1:
                v ^= pv
        if v:
            col = v.bit_length() - 1
            for c2 in list(pivots):
                if pivots[c2] >> col & 1:
                    pivots[c2] ^= v
            pivots[col] = v
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for col, pv in pivots.items():
            if pv >> free & 1:
                vec[col] = 1
        out.append(vec)
    return out
