"""Canonical orbit representatives for letters and words.

A word orbit (all renamings of a word) is represented by its canonical
form: atoms relabelled 0, 1, 2, ... in order of first occurrence, which
makes orbit equality a plain ``==``.  A-orbits (renamings that fix a
finite atom set A pointwise) keep the atoms of A and relabel the rest to
fresh indices above max(A).  Orbits of bounded-length words are
enumerated per tag sequence through set partitions of the atom slots,
one orbit per equality pattern.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from math import comb, factorial

from .atoms import (
    FinitePermutation,
    extend_to_permutation,
    apply,
    fresh_atom,
    support,
)


class AlphabetSpec:
    """A finite list of letter constructors ``tag(atom, ..., atom)``."""

    __slots__ = ("constructors", "_arity")

    def __init__(self, constructors):
        ctors = tuple((str(t), int(a)) for t, a in constructors)
        if not ctors:
            raise ValueError("alphabet needs at least one constructor")
        if len({t for t, _ in ctors}) != len(ctors):
            raise ValueError("duplicate tag in alphabet")
        if any(a < 0 for _, a in ctors):
            raise ValueError("negative arity")
        self.constructors = ctors
        self._arity = dict(ctors)

    @property
    def tags(self):
        return tuple(t for t, _ in self.constructors)

    def arity(self, tag: str) -> int:
        try:
            return self._arity[tag]
        except KeyError:
            raise KeyError(f"unknown tag {tag!r}") from None

    def __contains__(self, tag):
        return tag in self._arity

    @property
    def dimension(self) -> int:
        """Atom-dimension: the largest arity of any constructor."""
        return max(a for _, a in self.constructors)

    def __eq__(self, other):
        return (
            isinstance(other, AlphabetSpec)
            and self.constructors == other.constructors
        )

    def __hash__(self):
        return hash(self.constructors)

    def __repr__(self):
        body = ", ".join(f"{t}/{a}" for t, a in self.constructors)
        return f"AlphabetSpec({body})"


DEFAULT_ALPHABET = AlphabetSpec([("a", 1)])


class Letter:
    """One alphabet symbol: a tag plus a tuple of atoms.

    Treated as immutable everywhere (mutating one would corrupt hashes).
    """

    __slots__ = ("tag", "atoms")

    def __init__(self, tag, atoms=()):
        self.tag = tag
        self.atoms = tuple(atoms)

    def __eq__(self, other):
        return (
            isinstance(other, Letter)
            and self.tag == other.tag
            and self.atoms == other.atoms
        )

    def __hash__(self):
        return hash((self.tag, self.atoms))

    def _apply_perm(self, p):
        return Letter(self.tag, tuple(p(a) for a in self.atoms))

    def _support(self):
        return frozenset(self.atoms)

    def render(self) -> str:
        if not self.atoms:
            return self.tag
        return f"{self.tag}({','.join(str(a) for a in self.atoms)})"

    def __repr__(self):
        return f"Letter({self.render()!r})"


class Word:
    """A sequence of letters over one alphabet; treated as immutable."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        self.letters = tuple(letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __add__(self, other):
        if isinstance(other, Letter):
            return Word(self.letters + (other,))
        return Word(self.letters + other.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def atoms(self):
        """All atom occurrences, in positional order."""
        for letter in self.letters:
            yield from letter.atoms

    def _apply_perm(self, p):
        return Word(l._apply_perm(p) for l in self.letters)

    def _support(self):
        return frozenset(self.atoms())

    def suffixes(self):
        """All suffixes, longest first, ending with the empty word."""
        return [self[i:] for i in range(len(self) + 1)]

    def reversed(self):
        return Word(reversed(self.letters))

    def sort_key(self):
        return (len(self.letters), tuple((l.tag, l.atoms) for l in self.letters))

    def render(self) -> str:
        if not self.letters:
            return "eps"
        return " ".join(l.render() for l in self.letters)

    def __repr__(self):
        return f"Word({self.render()!r})"


EMPTY_WORD = Word()

# WordPattern / AWordPattern are Words that happen to be in canonical form;
# the constructors below are the only way the library produces them.
WordPattern = Word
AWordPattern = Word


_LETTER_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\(([^()]*)\))?$")


def parse_word(text: str, alphabet: AlphabetSpec | None = None) -> Word:
    """Parse the shared word syntax: ``tag(n1,...,nk)`` tokens, ``eps`` empty."""
    text = text.strip()
    if text in ("", "eps"):
        return EMPTY_WORD
    letters = []
    for token in text.split():
        m = _LETTER_RE.match(token)
        if not m:
            raise ValueError(f"bad letter {token!r}")
        tag, body = m.group(1), m.group(2)
        atoms = ()
        if body:
            try:
                atoms = tuple(int(x) for x in body.split(","))
            except ValueError:
                raise ValueError(f"bad atom list in {token!r}") from None
        if any(a < 0 for a in atoms):
            raise ValueError(f"negative atom in {token!r}")
        if alphabet is not None:
            if tag not in alphabet:
                raise ValueError(f"unknown tag {tag!r}")
            if alphabet.arity(tag) != len(atoms):
                raise ValueError(
                    f"tag {tag!r} takes {alphabet.arity(tag)} atoms, got {len(atoms)}"
                )
        letters.append(Letter(tag, atoms))
    return Word(letters)


def render_word(w: Word) -> str:
    return w.render()


def canonicalize(w: Word) -> WordPattern:
    """The orbit-canonical form: atoms become 0, 1, ... by first occurrence."""
    relabel = {}
    letters = []
    for letter in w:
        atoms = []
        for a in letter.atoms:
            if a not in relabel:
                relabel[a] = len(relabel)
            atoms.append(relabel[a])
        letters.append(Letter(letter.tag, tuple(atoms)))
    return Word(letters)


def canonicalize_with_perm(w: Word):
    """Canonical form plus a permutation p with ``apply(p, pattern) == w``."""
    pattern = canonicalize(w)
    mapping = {}
    for a, b in zip(pattern.atoms(), w.atoms()):
        mapping[a] = b
    return pattern, extend_to_permutation(mapping)


def a_canonicalize(w: Word, fixed) -> AWordPattern:
    """Canonical form under permutations fixing ``fixed`` pointwise.

    Atoms of ``fixed`` are kept; all others are relabelled, in first
    occurrence order, to fresh indices strictly above max(fixed).
    """
    fixed = frozenset(fixed)
    nxt = fresh_atom(fixed)
    relabel = {}
    letters = []
    for letter in w:
        atoms = []
        for a in letter.atoms:
            if a in fixed:
                atoms.append(a)
            else:
                if a not in relabel:
                    relabel[a] = nxt
                    nxt += 1
                atoms.append(relabel[a])
        letters.append(Letter(letter.tag, tuple(atoms)))
    return Word(letters)


def set_partition_labels(n: int):
    """All canonical labelings of n slots, one per set partition.

    Yields restricted-growth tuples: label 0 first, and each label at
    most one above the running maximum.  Lexicographic order.
    """
    if n == 0:
        yield ()
        return
    out = [0] * n

    def rec(i, mx):
        if i == n:
            yield tuple(out)
            return
        for v in range(mx + 2):
            out[i] = v
            yield from rec(i + 1, max(mx, v))

    yield from rec(1, 0)


def partial_injections(src, tgt):
    """All partial injective maps from src into tgt, as dicts.

    Larger domains come first; within one domain size the order follows
    itertools, so the whole enumeration is deterministic.
    """
    src = tuple(src)
    tgt = tuple(tgt)
    for r in range(min(len(src), len(tgt)), -1, -1):
        for chosen in itertools.combinations(src, r):
            for images in itertools.permutations(tgt, r):
                yield dict(zip(chosen, images))


def count_partial_permutations(k: int) -> int:
    """p(k): the number of partial injective maps on a k-element set."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return sum(comb(k, i) ** 2 * factorial(i) for i in range(k + 1))


@lru_cache(maxsize=None)
def _word_orbits(alphabet: AlphabetSpec, max_len: int):
    out = [EMPTY_WORD]
    tags = tuple(sorted(alphabet.tags))
    for n in range(1, max_len + 1):
        for tag_seq in itertools.product(tags, repeat=n):
            arities = [alphabet.arity(t) for t in tag_seq]
            total = sum(arities)
            for labels in set_partition_labels(total):
                letters = []
                pos = 0
                for tag, ar in zip(tag_seq, arities):
                    letters.append(Letter(tag, labels[pos : pos + ar]))
                    pos += ar
                out.append(Word(letters))
    return tuple(out)


def enumerate_word_orbits(alphabet: AlphabetSpec, max_len: int):
    """One canonical representative per orbit of words of length <= max_len.

    Ordered by length, then tag sequence, then equality pattern; the
    order is fixed so that learner runs are reproducible.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    return list(_word_orbits(alphabet, max_len))


def letter_patterns(tag: str, arity: int):
    """Canonical representatives of the letter orbits of one constructor."""
    return [Letter(tag, labels) for labels in set_partition_labels(arity)]


def split_into_a_orbits(pattern: Word, fixed, fresh_start=None):
    """One representative per A-orbit inside the orbit of ``pattern``.

    Representatives are produced by mapping the pattern's atom blocks
    into ``fixed`` by every partial injection; unmapped blocks become
    fresh pairwise-distinct atoms starting at ``fresh_start`` (defaults
    to just above max(fixed)).
    """
    fixed = frozenset(fixed)
    blocks = []
    for a in pattern.atoms():
        if a not in blocks:
            blocks.append(a)
    base = fresh_atom(fixed) if fresh_start is None else fresh_start
    out = []
    for inj in partial_injections(blocks, sorted(fixed)):
        assignment = {}
        nxt = base
        for b in blocks:
            if b in inj:
                assignment[b] = inj[b]
            else:
                assignment[b] = nxt
                nxt += 1
        out.append(
            Word(
                Letter(l.tag, tuple(assignment[a] for a in l.atoms))
                for l in pattern
            )
        )
    return out


def orbit_leq_into(x, y, leq) -> bool:
    """Does some renaming of x sit below y, i.e. orb(x) <= orb(y)?"""
    sx = sorted(support(x))
    sy = sorted(support(y))
    avoid = set(sx) | set(sy)
    for inj in partial_injections(sx, sy):
        mapping = dict(inj)
        nxt = fresh_atom(avoid)
        for a in sx:
            if a not in mapping:
                mapping[a] = nxt
                nxt += 1
        if leq(apply(extend_to_permutation(mapping), x), y):
            return True
    return False


def minimal_orbits(reps, leq):
    """Representatives of the minimal orbits of an equivariant partial order.

    ``leq`` compares concrete values; renamings are enumerated here.  By
    the rigidity of equivariant orders, two comparable orbits that sit
    below each other are equal, which is how orbit equality is decided.
    """
    reps = list(reps)
    keep = []
    for i, r in enumerate(reps):
        dominated = False
        for j, other in enumerate(reps):
            if i == j:
                continue
            if orbit_leq_into(other, r, leq) and not orbit_leq_into(r, other, leq):
                dominated = True
                break
        if dominated:
            continue
        if any(
            orbit_leq_into(prev, r, leq) and orbit_leq_into(r, prev, leq)
            for prev in keep
        ):
            continue  # same orbit as one already kept
        keep.append(r)
    return keep
