"""Free operad on the bar resolutions, as signed sums of decorated trees.

Basis keys are nested tuples:

* ``(0, k)`` is a leaf carrying label k;
* ``(1, word, children)`` is a vertex decorated by ``[word]`` (identity lead)
  whose arity is ``len(children) >= 2``.

Every lead coefficient is pushed into the leaf labels: a tree whose leaves
read ``L(1), ..., L(n)`` in planar order is ``L`` times the planar composite
(left multiplication), i.e. the planar composite acted on by ``L**-1``.  The
single vertex ``s[w]`` therefore has leaves labelled ``s(1), ..., s(n)``.
Arity-1 vertices are the operad unit and never appear.

Raw (non-canonical) trees may also use ``(2, lead, word, children)``;
``canonicalize`` turns them into signed basis keys.  Signs follow the Koszul
rule for the vertex decorations read in depth-first, left-to-right order.
"""

from functools import lru_cache
from itertools import product

from .bar import BarElement, bar_boundary, nondegenerate_words
from .core import (
    Accumulator,
    FormalSum,
    Permutation,
    all_permutations,
    block_permutation,
    compose,
    direct_sum,
    koszul_sign,
    reorder_sign,
)

LEAF, NODE, RAW = 0, 1, 2


def leaf(k):
    return (LEAF, k)


UNIT = leaf(1)


@lru_cache(maxsize=None)
def degree(t):
    if t[0] == LEAF:
        return 0
    return len(t[-2]) + sum(degree(c) for c in t[-1])


@lru_cache(maxsize=None)
def labels(t):
    """Leaf labels in planar order."""
    if t[0] == LEAF:
        return (t[1],)
    out = ()
    for c in t[-1]:
        out += labels(c)
    return out


def arity(t):
    return len(labels(t))


def min_label(t):
    return min(labels(t))


def vertices(t):
    """Vertices in depth-first left-to-right order, as (path, word) pairs."""
    out = []

    def walk(s, path):
        if s[0] == LEAF:
            return
        out.append((path, s[-2]))
        for i, c in enumerate(s[-1]):
            walk(c, path + (i,))

    walk(t, ())
    return out


@lru_cache(maxsize=1 << 16)
def vertex_count(t):
    if t[0] == LEAF:
        return 0
    return 1 + sum(vertex_count(c) for c in t[-1])


@lru_cache(maxsize=1 << 18)
def shift(t, offset):
    """Add ``offset`` to every leaf label."""
    if not offset:
        return t
    return relabel(t, lambda k: k + offset)


def relabel(t, f):
    if t[0] == LEAF:
        return (LEAF, f(t[1]))
    if t[0] == NODE:
        return (NODE, t[1], tuple(relabel(c, f) for c in t[2]))
    return (RAW, t[1], t[2], tuple(relabel(c, f) for c in t[3]))


def canonicalize(t):
    """Return ``(sign, key)`` for a raw tree, or ``None`` if it is zero."""
    if t[0] == LEAF:
        return 1, t
    if t[0] == NODE:
        lead, word, children = None, t[1], t[2]
    else:
        lead, word, children = t[1], t[2], t[3]
    if any(s.is_identity() for s in word):
        return None
    sign = 1
    kids = []
    for c in children:
        r = canonicalize(c)
        if r is None:
            return None
        sign *= r[0]
        kids.append(r[1])
    if len(kids) == 1:
        if word:
            return None
        return sign, kids[0]
    if lead is not None and not lead.is_identity():
        # gamma(s[w]; c_1..c_r) puts c_j on the leaf labelled j, at slot s**-1(j)
        dest = lead.inverse()
        sign *= koszul_sign([degree(k) for k in kids], dest)
        moved = [None] * len(kids)
        for j, k in enumerate(kids):
            moved[dest[j] - 1] = k
        kids = moved
    return sign, (NODE, word, tuple(kids))


def corolla(e):
    """Single-vertex tree of a bar element, as ``(sign, key)`` or ``None``."""
    n = e.arity
    return canonicalize((RAW, e.lead, e.word, tuple(leaf(i) for i in range(1, n + 1))))


def from_bar_sum(x):
    acc = Accumulator()
    for e, c in x.items():
        r = corolla(e)
        if r:
            acc.add_term(r[1], r[0] * c)
    return acc.result()


def leaf_action(t, sigma):
    """Right action ``t . sigma``: label l becomes sigma**-1(l)."""
    if len(sigma) != arity(t):
        raise ValueError(f"arity mismatch: {arity(t)} vs {len(sigma)}")
    inv = sigma.inverse()
    return relabel(t, lambda k: inv[k - 1])


def act(x, sigma):
    return x.map_keys(lambda t: (1, leaf_action(t, sigma)))


def label_permutation(t):
    """The permutation L with ``t == L * (planar composite)``."""
    return Permutation(labels(t))


def gamma_basis(x, ys):
    """Graft ``ys[j-1]`` onto the leaf of ``x`` labelled j; returns (sign, key)."""
    r = arity(x)
    if len(ys) != r:
        raise ValueError(f"composition needs {r} inputs, got {len(ys)}")
    offsets = []
    off = 0
    for y in ys:
        offsets.append(off)
        off += arity(y)
    shifted = [shift(y, o) for y, o in zip(ys, offsets)]
    nv = vertex_count(x)
    order = []
    counter = [0]

    def build(s):
        if s[0] == LEAF:
            j = s[1]
            order.append((nv + j - 1, degree(ys[j - 1])))
            return shifted[j - 1]
        order.append((counter[0], len(s[1])))
        counter[0] += 1
        return (NODE, s[1], tuple(build(c) for c in s[2]))

    key = build(x)
    return reorder_sign(order), key


def gamma(x, ys):
    """Multilinear composition of tree sums."""
    acc = Accumulator()
    ys_items = [y.items() for y in ys]
    for xt, xc in x.items():
        for combo in product(*ys_items):
            s, key = gamma_basis(xt, [t for t, _ in combo])
            c = xc
            for _, yc in combo:
                c *= yc
            acc.add_term(key, s * c)
    return acc.result()


def partial(x, i, y):
    """``x o_i y``: graft y at the leaf labelled i, units elsewhere."""
    r = arity(x)
    ys = [UNIT] * r
    ys[i - 1] = y
    return gamma_basis(x, ys)


def _replace(t, path, new):
    if not path:
        return new
    i = path[0]
    kids = list(t[-1])
    kids[i] = _replace(kids[i], path[1:], new)
    if t[0] == NODE:
        return (NODE, t[1], tuple(kids))
    return (RAW, t[1], t[2], tuple(kids))


def _subtree(t, path):
    for i in path:
        t = t[-1][i]
    return t


def tree_boundary(t):
    """Leibniz rule over vertices in depth-first order."""
    acc = Accumulator()
    pre = 0
    for path, word in vertices(t):
        if word:
            sign = -1 if pre % 2 else 1
            v = _subtree(t, path)
            n = len(v[2])
            for e, c in bar_boundary(BarElement(Permutation.identity(n), word)).items():
                raw = _replace(t, path, (RAW, e.lead, e.word, v[2]))
                r = canonicalize(raw)
                if r:
                    acc.add_term(r[1], sign * c * r[0])
        pre += len(word)
    return acc.result()


def boundary(x):
    return x.map(tree_boundary)


def pi0(t):
    """Composite permutation of a degree-0 (possibly raw) tree.

    Computed by contracting vertices recursively, independently of
    ``canonicalize``: ``pi0 = labels o Q`` where Q sends a canonical leaf
    position to the raw leaf that lands there.
    """
    if degree(t):
        raise ValueError("pi0 is only defined in degree 0")
    return compose(Permutation(labels(t)), _pi0_planar(t))


def _pi0_planar(t):
    if t[0] == LEAF:
        return Permutation.identity(1)
    kids = t[-1]
    r = len(kids)
    lead = t[1] if t[0] == RAW else Permutation.identity(r)
    # slot k of gamma(s[]; c_1..c_r) holds c_{s(k)}
    in_slots = [kids[lead[k] - 1] for k in range(r)]
    move = block_permutation(lead, [arity(c) for c in in_slots])
    return compose(move, direct_sum(*(_pi0_planar(c) for c in in_slots)))


@lru_cache(maxsize=None)
def planar_shapes(n):
    """Planar trees with n leaves and every vertex of arity >= 2 (leaves unlabeled)."""
    if n == 1:
        return (leaf(0),)
    out = []
    for r in range(2, n + 1):
        for sizes in _compositions(n, r):
            for kids in product(*(planar_shapes(s) for s in sizes)):
                out.append((NODE, None, tuple(kids)))
    return tuple(out)


def _compositions(n, r):
    if r == 1:
        yield (n,)
        return
    for first in range(1, n - r + 2):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def _vertex_arities(shape):
    out = []

    def walk(s):
        if s[0] == LEAF:
            return
        out.append(len(s[2]))
        for c in s[2]:
            walk(c)

    walk(shape)
    return out


def _fill(shape, words, labels_iter):
    if shape[0] == LEAF:
        return leaf(next(labels_iter))
    w = next(words)
    return (NODE, w, tuple(_fill(c, words, labels_iter) for c in shape[2]))


def _degree_splits(d, k):
    if k == 0:
        if d == 0:
            yield ()
        return
    for first in range(d + 1):
        for rest in _degree_splits(d - first, k - 1):
            yield (first,) + rest


def enumerate_basis(n, d, shapes_filter=None):
    """All basis trees of arity n and degree d, each exactly once, sorted."""
    if n == 1:
        return [UNIT] if d == 0 else []
    out = []
    perms = all_permutations(n)
    for shape in planar_shapes(n):
        ars = _vertex_arities(shape)
        for split in _degree_splits(d, len(ars)):
            if shapes_filter and not shapes_filter(ars, split):
                continue
            word_lists = [nondegenerate_words(a, m) for a, m in zip(ars, split)]
            for words in product(*word_lists):
                for L in perms:
                    out.append(_fill(shape, iter(words), iter(L)))
    out.sort()
    return out


def random_tree(rng, n, d, max_tries=1000):
    """Random basis tree of arity n, degree d (arity >= 2 when d > 0)."""
    if n == 1:
        if d:
            raise ValueError("arity 1 is concentrated in degree 0")
        return UNIT
    shapes = planar_shapes(n)
    shape = rng.choice(shapes)
    ars = _vertex_arities(shape)
    split = [0] * len(ars)
    for _ in range(d):
        split[rng.randrange(len(ars))] += 1
    words = []
    for a, m in zip(ars, split):
        letters = [p for p in all_permutations(a) if not p.is_identity()]
        words.append(tuple(rng.choice(letters) for _ in range(m)))
    L = list(range(1, n + 1))
    rng.shuffle(L)
    return _fill(shape, iter(words), iter(L))


def random_raw(rng, t):
    """Random raw representative of ``t``: extra leads compensated by reordering.

    Returns ``(sign, raw)`` with ``canonicalize(raw) == (sign, t)``.
    """
    if t[0] == LEAF:
        return 1, t
    kids = t[2]
    r = len(kids)
    sub = [random_raw(rng, c) for c in kids]
    sign = 1
    for s, _ in sub:
        sign *= s
    raws = [c for _, c in sub]
    lead = list(range(1, r + 1))
    rng.shuffle(lead)
    lead = Permutation(lead)
    dest = lead.inverse()
    # raw child j lands in slot dest(j), so it must be kids[dest(j)-1]
    arranged = [raws[dest[j] - 1] for j in range(r)]
    sign *= koszul_sign([degree(kids[dest[j] - 1]) for j in range(r)], dest)
    return sign, (RAW, lead, t[1], tuple(arranged))
