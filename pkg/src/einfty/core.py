"""Permutations, formal integer sums and Koszul signs.

Permutations are written in one-line notation on 1..n and composed
right-to-left: ``compose(p, q)(i) == p(q(i))``.  This convention is used
everywhere in the package (bar resolution, tree composition, tensor actions).
"""

from itertools import permutations as _itperms


class Permutation(tuple):
    """Element of the symmetric group in one-line notation ``(a1, ..., an)``."""

    __slots__ = ()

    def __new__(cls, images):
        images = tuple(int(a) for a in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def _trusted(cls, images):
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, n):
        return cls._trusted(range(1, n + 1))

    @property
    def n(self):
        return len(self)

    def __call__(self, i):
        return self[i - 1]

    def is_identity(self):
        return all(a == i for i, a in enumerate(self, 1))

    def inverse(self):
        inv = [0] * len(self)
        for i, a in enumerate(self, 1):
            inv[a - 1] = i
        return Permutation._trusted(inv)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return "Permutation(" + " ".join(map(str, self)) + ")"

    def __str__(self):
        return "(" + " ".join(map(str, self)) + ")"


def compose(p, q):
    """Return ``p o q``, i.e. ``i -> p(q(i))``."""
    if len(p) != len(q):
        raise ValueError(f"arity mismatch: {len(p)} vs {len(q)}")
    return Permutation._trusted(p[b - 1] for b in q)


def all_permutations(n):
    return [Permutation._trusted(p) for p in _itperms(range(1, n + 1))]


def direct_sum(*perms):
    """Block-diagonal permutation ``p1 + p2 + ...`` acting on consecutive blocks."""
    out = []
    off = 0
    for p in perms:
        out.extend(off + a for a in p)
        off += len(p)
    return Permutation._trusted(out)


def block_permutation(sigma, sizes):
    """Permute blocks of the given sizes the way ``sigma`` permutes letters.

    The k-th element of block j goes to ``offset(j) + k`` with
    ``offset(j) = sum(sizes[j'] for j' with sigma(j') < sigma(j))``.
    """
    if len(sigma) != len(sizes):
        raise ValueError("need one block size per letter")
    if any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    r = len(sigma)
    offset = [0] * r
    for j in range(r):
        offset[j] = sum(sizes[i] for i in range(r) if sigma[i] < sigma[j])
    out = []
    for j in range(r):
        out.extend(offset[j] + k for k in range(1, sizes[j] + 1))
    return Permutation._trusted(out)


def koszul_sign(degrees, p):
    """Sign of moving item j to position p(j), with graded commutativity.

    Each pair of items whose relative order is reversed contributes
    ``(-1)**(d_i * d_j)``.
    """
    if len(degrees) != len(p):
        raise ValueError("need one degree per item")
    odd = [d % 2 for d in degrees]
    sign = 1
    n = len(p)
    for i in range(n):
        if not odd[i]:
            continue
        for j in range(i + 1, n):
            if odd[j] and p[i] > p[j]:
                sign = -sign
    return sign


def reorder_sign(items):
    """Koszul sign for a list of ``(original_position, degree)`` in new order."""
    sign = 1
    for a in range(len(items)):
        pa, da = items[a]
        if not da % 2:
            continue
        for b in range(a + 1, len(items)):
            pb, db = items[b]
            if db % 2 and pa > pb:
                sign = -sign
    return sign


class FormalSum:
    """Finitely supported integer combination of hashable, ordered basis keys.

    Zero coefficients are never stored, so equality is structural.
    Instances are treated as immutable once built.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                if c:
                    c = d.get(k, 0) + c
                    if c:
                        d[k] = c
                    else:
                        d.pop(k, None)
        self._terms = d

    @classmethod
    def _from_clean(cls, d):
        fs = cls.__new__(cls)
        fs._terms = d
        return fs

    @classmethod
    def basis(cls, key, coeff=1):
        return cls._from_clean({key: coeff} if coeff else {})

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def items(self):
        return sorted(self._terms.items())

    def keys(self):
        return sorted(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __getitem__(self, key):
        return self._terms.get(key, 0)

    def __contains__(self, key):
        return key in self._terms

    def __eq__(self, other):
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        d = dict(self._terms)
        for k, c in other._terms.items():
            c = d.get(k, 0) + c
            if c:
                d[k] = c
            else:
                del d[k]
        return FormalSum._from_clean(d)

    __radd__ = __add__

    def __neg__(self):
        return FormalSum._from_clean({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, int):
            return NotImplemented
        if scalar == 0:
            return FormalSum()
        return FormalSum._from_clean({k: scalar * c for k, c in self._terms.items()})

    __rmul__ = __mul__

    def map(self, f):
        """Extend ``f`` (key -> FormalSum or dict) linearly."""
        acc = Accumulator()
        for k, c in self._terms.items():
            acc.add(f(k), c)
        return acc.result()

    def map_keys(self, f):
        """Apply ``f: key -> (sign, key) | None`` termwise."""
        acc = Accumulator()
        for k, c in self._terms.items():
            v = f(k)
            if v is not None:
                acc.add_term(v[1], v[0] * c)
        return acc.result()

    def degree(self, deg_fn):
        """Common degree of all terms, ``None`` for zero, or ``"mixed"``."""
        degs = {deg_fn(k) for k in self._terms}
        if not degs:
            return None
        if len(degs) == 1:
            return degs.pop()
        return "mixed"

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.items():
            parts.append(f"{c:+d}*{k!r}")
        return " ".join(parts)


class Accumulator:
    """Mutable builder for FormalSum; avoids rebuilding dicts in inner loops."""

    __slots__ = ("d",)

    def __init__(self):
        self.d = {}

    def add_term(self, key, coeff):
        if not coeff:
            return
        d = self.d
        c = d.get(key, 0) + coeff
        if c:
            d[key] = c
        else:
            del d[key]

    def add(self, other, coeff=1):
        if not coeff:
            return
        items = other._terms.items() if isinstance(other, FormalSum) else other.items()
        for k, c in items:
            self.add_term(k, coeff * c)

    def result(self):
        return FormalSum._from_clean(self.d)
