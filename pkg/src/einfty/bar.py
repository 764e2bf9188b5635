"""Normalized bar resolution of Z over the symmetric group.

A basis element ``lead[s1/.../sm]`` is stored as ``BarElement(lead, word)``.
Words containing the identity permutation are degenerate and count as zero,
which makes the resolution of Sigma_1 the unit complex Z in degree 0.
"""

from itertools import product
from typing import NamedTuple

from .core import Accumulator, FormalSum, Permutation, all_permutations, compose


class BarElement(NamedTuple):
    lead: Permutation
    word: tuple = ()

    @property
    def arity(self):
        return len(self.lead)

    @property
    def degree(self):
        return len(self.word)

    def is_degenerate(self):
        return any(s.is_identity() for s in self.word)


def bar(lead, *word):
    """Convenience constructor: ``bar((2, 1), (2, 1))`` is ``(2 1)*[(2 1)]``."""
    lead = lead if isinstance(lead, Permutation) else Permutation(lead)
    word = tuple(w if isinstance(w, Permutation) else Permutation(w) for w in word)
    for w in word:
        if len(w) != len(lead):
            raise ValueError("all permutations in a bar element need the same arity")
    return BarElement(lead, word)


def unit_bar(n):
    """The degree-0 generator ``[ ]`` of arity n."""
    return BarElement(Permutation.identity(n), ())


def bar_degree(e):
    return len(e.word)


def as_sum(e, coeff=1):
    if e.is_degenerate():
        return FormalSum()
    return FormalSum.basis(e, coeff)


def bar_boundary(e):
    """Alternating sum of face maps, left-linear in the lead coefficient."""
    m = len(e.word)
    acc = Accumulator()
    if m == 0:
        return acc.result()
    lead, w = e.lead, e.word
    # d_0 composes the first letter into the lead coefficient
    acc.add_term(BarElement(compose(lead, w[0]), w[1:]), 1)
    for i in range(1, m):
        merged = compose(w[i - 1], w[i])
        if merged.is_identity():
            continue
        acc.add_term(BarElement(lead, w[: i - 1] + (merged,) + w[i + 1:]), -1 if i % 2 else 1)
    acc.add_term(BarElement(lead, w[:-1]), -1 if m % 2 else 1)
    return acc.result()


def bar_contraction(e):
    """psi(lead[w]) = [lead/w], and zero when the lead is the identity."""
    if e.lead.is_identity():
        return FormalSum()
    n = len(e.lead)
    return FormalSum.basis(BarElement(Permutation.identity(n), (e.lead,) + e.word))


def bar_augmentation(x):
    """epsilon: 1 on every degree-0 basis element, 0 in positive degree."""
    return sum(c for e, c in x.items() if not e.word)


def bar_coaugmentation(k, n):
    """eta(k) = k[ ] in arity n."""
    return FormalSum.basis(unit_bar(n), k)


def bar_left_multiply(sigma, e):
    """sigma . (lead[w]) = (sigma o lead)[w]; the module structure the boundary respects."""
    if len(sigma) != len(e.lead):
        raise ValueError(f"arity mismatch: {len(e.lead)} vs {len(sigma)}")
    return BarElement(compose(sigma, e.lead), e.word)


def bar_right_action(e, sigma):
    """(lead[w]) . sigma = (sigma**-1 o lead)[w].

    The boundary composes into the lead from the left, so right
    multiplication of the lead would not commute with it; acting by the
    inverse on the left is the right action that does.
    """
    if len(sigma) != len(e.lead):
        raise ValueError(f"arity mismatch: {len(e.lead)} vs {len(sigma)}")
    return BarElement(compose(sigma.inverse(), e.lead), e.word)


def boundary(x):
    return x.map(bar_boundary)


def contraction(x):
    return x.map(bar_contraction)


def right_action(x, sigma):
    return x.map_keys(lambda e: (1, bar_right_action(e, sigma)))


def eta_epsilon(x, n):
    return bar_coaugmentation(bar_augmentation(x), n)


def nondegenerate_words(n, m):
    letters = [p for p in all_permutations(n) if not p.is_identity()]
    return [tuple(w) for w in product(letters, repeat=m)]


def basis(n, m, lead_identity=False):
    """All basis elements of degree m in arity n (optionally lead = identity)."""
    leads = [Permutation.identity(n)] if lead_identity else all_permutations(n)
    return [BarElement(s, w) for s in leads for w in nondegenerate_words(n, m)]


def random_element(rng, n, m):
    perms = all_permutations(n)
    letters = [p for p in perms if not p.is_identity()]
    if m and not letters:
        raise ValueError("arity 1 has no positive-degree elements")
    return BarElement(rng.choice(perms), tuple(rng.choice(letters) for _ in range(m)))
