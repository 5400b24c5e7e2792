"""Shared brute-force oracles and fixture builders.

Everything here is deliberately naive: these functions recompute, by
exhaustive enumeration over small finite universes, the quantities the
library computes symbolically, so that each side can check the other.
"""

import itertools
import random

import pytest

from nomres.orbits import AlphabetSpec, Letter, Word, enumerate_word_orbits
from nomres.automaton import accepts
from nomres.rows import ColumnSet, Row


def all_concrete_words(alphabet, universe, length):
    """Every word of exactly `length` with atoms drawn from `universe`."""
    letters = [
        Letter(tag, atoms)
        for tag, arity in alphabet.constructors
        for atoms in itertools.product(universe, repeat=arity)
    ]
    return [Word(c) for c in itertools.product(letters, repeat=length)]


def brute_orbit_count(alphabet, length):
    """Count word orbits of exactly `length` by closing concrete words
    under all permutations of a big-enough finite universe."""
    slots = length * alphabet.dimension
    universe = list(range(max(slots, 1)))
    perms = [dict(zip(universe, p)) for p in itertools.permutations(universe)]
    seen = set()
    count = 0
    for w in all_concrete_words(alphabet, universe, length):
        key = tuple((l.tag, l.atoms) for l in w)
        if key in seen:
            continue
        count += 1
        for p in perms:
            img = tuple((l.tag, tuple(p[a] for a in l.atoms)) for l in w)
            seen.add(img)
    return count


def brute_partial_injection_count(k):
    """Count partial injective maps on {0..k-1} by listing them."""
    total = 0
    for r in range(k + 1):
        for src in itertools.combinations(range(k), r):
            for img in itertools.permutations(range(k), r):
                total += 1
    return total


def brute_partial_injections(src, tgt):
    out = []
    for r in range(min(len(src), len(tgt)) + 1):
        for chosen in itertools.combinations(src, r):
            for img in itertools.permutations(tgt, r):
                out.append(dict(zip(chosen, img)))
    return out


def language_disagreement(aut, predicate, depth):
    """First word orbit up to `depth` where automaton and predicate differ."""
    for w in enumerate_word_orbits(aut.alphabet, depth):
        if accepts(aut, w) != predicate(w):
            return w
    return None


def bounded_universal(aut, depth):
    """Does the automaton accept every word orbit up to `depth`?"""
    return all(accepts(aut, w) for w in enumerate_word_orbits(aut.alphabet, depth))


# -- finite-universe row lattice oracle --------------------------------------
#
# Families are kept faithful to the infinite-atom semantics by bounding
# supports to at most one atom and columns to single-atom patterns, so a
# three-atom universe realizes every placement any comparison can need.

ROW_ALPHABET = AlphabetSpec([("a", 1)])
LATTICE_UNIVERSE = (0, 1, 2)


def lattice_columns():
    cs = ColumnSet()
    cs.add(Word([Letter("a", (0,)), Letter("a", (0,))]))
    return cs


def make_row(columns, support, bits):
    """A synthetic row: `bits` maps rendered basis columns to booleans."""
    owner = Word([Letter("a", (a,)) for a in sorted(support)])
    return Row.build(
        owner, columns, lambda e: bits.get(e.render(), False), support=support
    )


def random_row(rng, columns):
    support = frozenset() if rng.random() < 0.4 else frozenset((0,))
    basis = columns.instances(support)
    bits = {e.render(): rng.random() < 0.5 for e in basis}
    return make_row(columns, support, bits)


def random_family(rng, columns, size):
    return [random_row(rng, columns) for _ in range(size)]


def concrete_columns(columns, universe):
    out = []
    for pattern in columns:
        blocks = sorted(frozenset(pattern.atoms()))
        for assign in itertools.permutations(universe, len(blocks)):
            m = dict(zip(blocks, assign))
            w = Word(Letter(l.tag, tuple(m[a] for a in l.atoms)) for l in pattern)
            if w not in out:
                out.append(w)
    return out


def concretize_row(row, columns_concrete, universe):
    """All instantiations of the row's orbit inside the universe, each as
    a frozenset of concrete columns."""
    sup = sorted(row.reduced().support)
    out = []
    for img in itertools.permutations(universe, len(sup)):
        from nomres.atoms import extend_to_permutation

        perm = extend_to_permutation(dict(zip(sup, img)))
        inv = perm.invert()
        out.append(
            frozenset(
                c for c in columns_concrete if row.reduced().value_mapped(inv, c)
            )
        )
    return out


def concretize_family(family, columns_concrete, universe):
    out = []
    for r in family:
        for s in concretize_row(r, columns_concrete, universe):
            if s not in out:
                out.append(s)
    return out


def brute_join_irreducible(target_set, concrete_family):
    if not target_set:
        return False
    below = [y for y in concrete_family if y < target_set]
    union = frozenset().union(*below) if below else frozenset()
    return union != target_set


def brute_generated(target_set, concrete_family):
    below = [y for y in concrete_family if y <= target_set]
    union = frozenset().union(*below) if below else frozenset()
    return union == target_set


@pytest.fixture
def rng():
    return random.Random(20240921)


# -- random symbolic automata --------------------------------------------

def random_automaton(rng):
    """A small random automaton: 1-3 state orbits, dimensions <= 2,
    a handful of valid transition lines, guessing allowed."""
    from nomres.automaton import StateOrbit, TransitionLine, SymbolicAutomaton

    roll = rng.random()
    if roll < 0.25:
        alphabet = AlphabetSpec([("a", 1), ("c", 0)])
    elif roll < 0.45:
        alphabet = AlphabetSpec([("a", 1), ("b", 2)])
    else:
        alphabet = AlphabetSpec([("a", 1)])
    states = [
        StateOrbit(f"q{i}", rng.randint(0, 2)) for i in range(rng.randint(1, 3))
    ]
    lines = []
    for src in states:
        src_vars = tuple(f"s{i}" for i in range(src.dimension))
        for tag, arity in alphabet.constructors:
            for _ in range(rng.randint(0, 2)):
                letter_vars = []
                for j in range(arity):
                    pool = list(src_vars) + [f"l{j}"] + list(letter_vars)
                    letter_vars.append(rng.choice(pool))
                dst = rng.choice(states)
                pool = list(dict.fromkeys(list(src_vars) + letter_vars))
                dst_vars = []
                for j in range(dst.dimension):
                    options = [v for v in pool if v not in dst_vars] + [f"g{j}"]
                    dst_vars.append(rng.choice(options))
                lines.append(
                    TransitionLine(
                        src.name, src_vars, tag, tuple(letter_vars),
                        dst.name, tuple(dst_vars),
                    )
                )
    names = [q.name for q in states]
    initial = [n for n in names if rng.random() < 0.6] or [names[0]]
    final = [n for n in names if rng.random() < 0.5]
    return SymbolicAutomaton(alphabet, states, initial, final, lines)


# -- acceptance reporting ------------------------------------------------

_acceptance_outcomes = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _acceptance_outcomes.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_outcomes:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, outcome in _acceptance_outcomes:
            terminalreporter.write_line(f"  {name}: {outcome}")
