"""Simulated teacher: exact membership, bounded equivalence.

Membership is answered exactly, from an automaton simulation or a direct
predicate.  Equivalence is necessarily approximate (exact equivalence of
these automata is undecidable): the oracle walks word-orbit
representatives up to a depth and returns the first disagreement, which
is sound, and complete only for the words it looked at.  Checking one
representative per orbit suffices because both languages are
equivariant.
"""

from __future__ import annotations

from .orbits import AlphabetSpec, Word, enumerate_word_orbits
from .automaton import SymbolicAutomaton, accepts
from . import corpus


class MembershipOracle:
    """Counts queries; answers from an automaton or a predicate."""

    def __init__(self, alphabet: AlphabetSpec, predicate=None, automaton=None,
                 name=None):
        if (predicate is None) == (automaton is None):
            raise ValueError("provide exactly one of predicate, automaton")
        self.alphabet = alphabet
        self.name = name
        self._predicate = predicate
        self._automaton = automaton
        self.query_count = 0

    def evaluate(self, w: Word) -> bool:
        """Uncounted evaluation (used internally by equivalence testing)."""
        if self._automaton is not None:
            return accepts(self._automaton, w)
        return bool(self._predicate(w))

    def member(self, w: Word) -> bool:
        self.query_count += 1
        return self.evaluate(w)


def automaton_oracle(aut: SymbolicAutomaton, name=None) -> MembershipOracle:
    return MembershipOracle(aut.alphabet, automaton=aut, name=name)


def predicate_oracle(alphabet, predicate, name=None) -> MembershipOracle:
    return MembershipOracle(alphabet, predicate=predicate, name=name)


class EquivalenceOracle:
    """Bounded equivalence: sound counterexamples, depth-limited yes."""

    def __init__(self, target: MembershipOracle, depth: int):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.target = target
        self.depth = depth
        self.query_count = 0

    def equivalent(self, hypothesis):
        """None when the hypothesis agrees on every orbit up to the depth,
        otherwise the shortest (then enumeration-first) disagreeing word."""
        self.query_count += 1
        aut = getattr(hypothesis, "automaton", hypothesis)
        for w in enumerate_word_orbits(self.target.alphabet, self.depth):
            if self.target.evaluate(w) != accepts(aut, w):
                return w
        return None


class Teacher:
    """A membership oracle and an equivalence oracle over one alphabet."""

    def __init__(self, membership: MembershipOracle, equivalence: EquivalenceOracle):
        self.membership = membership
        self.equivalence = equivalence

    @property
    def alphabet(self):
        return self.membership.alphabet


def for_language(alphabet, predicate=None, automaton=None, eq_depth=5,
                 name=None) -> Teacher:
    membership = MembershipOracle(
        alphabet, predicate=predicate, automaton=automaton, name=name
    )
    return Teacher(membership, EquivalenceOracle(membership, eq_depth))


def for_corpus(name: str, eq_depth=None) -> Teacher:
    """A teacher for a built-in language, backed by its predicate.

    Default depth is twice the known characterising length plus one, a
    heuristic with no completeness claim; non-residual entries have no
    such length and need an explicit depth.
    """
    entry = corpus.get(name)
    if eq_depth is None:
        if entry.char_length is None:
            raise ValueError(
                f"{name} has no characterising length; pass eq_depth explicitly"
            )
        eq_depth = 2 * entry.char_length + 1
    return for_language(
        entry.automaton.alphabet,
        predicate=entry.predicate,
        eq_depth=eq_depth,
        name=entry.name,
    )
