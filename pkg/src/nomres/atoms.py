"""Atoms, finite permutations, and supports.

Atoms are plain non-negative ints used purely as names: only equality
between atoms is observable, and every public operation of this library
must give renaming-invariant results.  A finite permutation is a
bijection of the atom universe that moves only finitely many atoms; it
acts structurally on every atom-bearing value (letters, words, automaton
configurations, table rows) through :func:`apply`.
"""

from __future__ import annotations

import itertools

Atom = int
SupportSet = frozenset


class FinitePermutation:
    """A bijection on atoms, stored as a finite map and identity elsewhere."""

    __slots__ = ("_map",)

    def __init__(self, mapping=()):
        m = {int(k): int(v) for k, v in dict(mapping).items()}
        m = {k: v for k, v in m.items() if k != v}
        if any(k < 0 or v < 0 for k, v in m.items()):
            raise ValueError("atoms are non-negative ints")
        if len(set(m.values())) != len(m):
            raise ValueError("mapping is not injective")
        if set(m) != set(m.values()):
            raise ValueError("domain and image differ: not a permutation")
        self._map = m

    def __call__(self, atom: Atom) -> Atom:
        return self._map.get(atom, atom)

    def moved(self) -> SupportSet:
        """The atoms this permutation does not fix."""
        return frozenset(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def compose(self, other: "FinitePermutation") -> "FinitePermutation":
        """self after other: compose(p, q)(a) = p(q(a))."""
        domain = set(self._map) | set(other._map)
        return FinitePermutation({a: self(other(a)) for a in domain})

    def invert(self) -> "FinitePermutation":
        return FinitePermutation({v: k for k, v in self._map.items()})

    @classmethod
    def identity(cls) -> "FinitePermutation":
        return cls()

    @classmethod
    def swap(cls, a: Atom, b: Atom) -> "FinitePermutation":
        if a == b:
            return cls()
        return cls({a: b, b: a})

    def __eq__(self, other):
        return isinstance(other, FinitePermutation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        pairs = ", ".join(f"{k}->{v}" for k, v in sorted(self._map.items()))
        return f"FinitePermutation({{{pairs}}})"


IDENTITY = FinitePermutation()


def extend_to_permutation(mapping) -> FinitePermutation:
    """Close a finite partial injection on atoms into a finite permutation.

    The functional graph of a partial injection is a disjoint union of
    simple paths and cycles; each open path is closed by sending its last
    element back to its first.  The result agrees with ``mapping`` on its
    whole domain.
    """
    m = {int(k): int(v) for k, v in dict(mapping).items()}
    if len(set(m.values())) != len(m):
        raise ValueError("mapping is not injective")
    closed = dict(m)
    targets = set(m.values())
    for start in m:
        if start in targets:
            continue  # not the head of a path
        end = m[start]
        while end in m:
            end = m[end]
        if end != start:
            closed[end] = start
    return FinitePermutation(closed)


def fresh_atom(avoid) -> Atom:
    """The least atom strictly greater than everything in ``avoid``."""
    avoid = list(avoid)
    return max(avoid) + 1 if avoid else 0


def fresh_atoms(avoid):
    """An endless stream of pairwise-distinct atoms outside ``avoid``."""
    return itertools.count(fresh_atom(avoid))


def apply(p: FinitePermutation, v):
    """Act with a permutation on an atom-bearing value, structurally."""
    hook = getattr(v, "_apply_perm", None)
    if hook is not None:
        return hook(p)
    if isinstance(v, int):
        return p(v)
    if isinstance(v, tuple):
        return tuple(apply(p, x) for x in v)
    if isinstance(v, frozenset):
        return frozenset(apply(p, x) for x in v)
    if isinstance(v, list):
        return [apply(p, x) for x in v]
    raise TypeError(f"cannot apply a permutation to {type(v).__name__}")


def support(v) -> SupportSet:
    """The least support of a value: the set of atoms occurring in it."""
    hook = getattr(v, "_support", None)
    if hook is not None:
        return hook()
    if isinstance(v, int):
        return frozenset((v,))
    if isinstance(v, (tuple, frozenset, list, set)):
        out = frozenset()
        for x in v:
            out |= support(x)
        return out
    raise TypeError(f"cannot compute the support of {type(v).__name__}")
