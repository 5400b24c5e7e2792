"""Residual nominal (register) automata over equality atoms.

Simulation of nondeterministic nominal automata with guessing, the
join-semilattice of finitely supported observation rows, a universality
decision procedure for residual automata, anchoring constructions, and
an active-learning loop that converges exactly on residual languages.
"""

from .atoms import Atom, FinitePermutation, SupportSet, apply, support
from .orbits import (
    AlphabetSpec,
    DEFAULT_ALPHABET,
    Letter,
    Word,
    EMPTY_WORD,
    a_canonicalize,
    canonicalize,
    count_partial_permutations,
    enumerate_word_orbits,
    minimal_orbits,
    parse_word,
    render_word,
    split_into_a_orbits,
)
from .automaton import (
    SymbolicAutomaton,
    StateOrbit,
    TransitionLine,
    UniversalityResult,
    accepts,
    accepts_from,
    anchor,
    anchor_top,
    bounded_residuality_witnesses,
    is_non_guessing,
    is_universal_residual,
    parse,
    render,
    reverse,
    run_frontier,
    union,
    universal_automaton,
)
from .rows import (
    ColumnSet,
    Row,
    RowFamily,
    is_generated_by,
    is_join_irreducible,
    join_below,
    row_leq,
    row_value,
)
from .learner import (
    Hypothesis,
    LearnBudget,
    LearnResult,
    LearnStats,
    ObservationTable,
    TableNotClosed,
    TableNotConsistent,
    hypothesis_agreement_violations,
    learn,
)
from .teacher import (
    EquivalenceOracle,
    MembershipOracle,
    Teacher,
    for_corpus,
    for_language,
)
from . import corpus

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
