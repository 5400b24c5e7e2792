"""Observation table and the modified residual-automaton learner.

The row-label set S is always the set of all word orbits up to a length
bound (it starts at {eps} and, when the table is not join-closed, jumps
to include every word of the defect's length, which is what makes the
loop find all characterising words eventually).  The column set E grows
by orbits of suffixes, from consistency defects and counterexamples.
Membership answers are memoized per canonical concatenation, so one
query per word orbit suffices.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, asdict
from typing import Optional

from .atoms import apply, fresh_atom
from .orbits import (
    Word,
    EMPTY_WORD,
    canonicalize,
    canonicalize_with_perm,
    enumerate_word_orbits,
    letter_patterns,
    partial_injections,
    split_into_a_orbits,
)
from .rows import (
    ColumnSet,
    Row,
    dedup_by_orbit,
    is_join_irreducible,
    orbit_equal,
    row_leq,
    _joint_instances,
    _placed_leq,
    _realize,
)
from .automaton import (
    SymbolicAutomaton,
    StateOrbit,
    TransitionLine,
    accepts,
)


class TableNotClosed(RuntimeError):
    pass


class TableNotConsistent(RuntimeError):
    pass


class ObservationTable:
    """Membership observations over row labels S u S.Sigma and columns E."""

    def __init__(self, alphabet, oracle=None, columns=None):
        self.alphabet = alphabet
        self.oracle = oracle
        self.length = 0  # S is every word orbit of length <= this
        self.columns = columns if columns is not None else ColumnSet()
        self.answers = {}
        self._rows = {}
        self._filled_at = None
        self._concat_keys = {}
        self._fill_caches()

    def _fill_caches(self):
        self._family = None
        self._upper_index = None
        self._ji_cache = {}
        self._leq_cache = {}
        self._rowof_cache = {}

    # -- labels ---------------------------------------------------------

    def s_labels(self):
        return enumerate_word_orbits(self.alphabet, self.length)

    def all_labels(self):
        """S u S.Sigma; since S is length-bounded this is one length more."""
        return enumerate_word_orbits(self.alphabet, self.length + 1)

    # -- filling --------------------------------------------------------

    def _concat_key(self, label, e):
        key = self._concat_keys.get((label, e))
        if key is None:
            key = canonicalize(label + e)
            self._concat_keys[(label, e)] = key
        return key

    def _answer(self, oracle, label, e):
        key = self._concat_key(label, e)
        value = self.answers.get(key)
        if value is None:
            value = bool(oracle.member(key))
            self.answers[key] = value
        return value

    def fill(self, oracle=None):
        """Build rows for every S u S.Sigma representative, querying once
        per previously unseen canonical concatenation."""
        oracle = oracle or self.oracle
        if oracle is None:
            raise ValueError("no membership oracle")
        state = (self.length, self.columns.version)
        if self._filled_at == state:
            return self
        rows = {}
        for label in self.all_labels():
            rows[label] = Row.build(
                label,
                self.columns,
                lambda e, label=label: self._answer(oracle, label, e),
            )
        self._rows = rows
        self._filled_at = state
        self._fill_caches()
        return self

    def _require_filled(self):
        if self._filled_at != (self.length, self.columns.version):
            raise RuntimeError("table is not filled; call fill() first")

    def row(self, label) -> Row:
        self._require_filled()
        return self._rows[label]

    def row_of(self, w: Word) -> Row:
        """The row of any concrete word in the closure of S u S.Sigma,
        re-based on its least support (placements stay cheap that way)."""
        self._require_filled()
        cached = self._rowof_cache.get(w)
        if cached is None:
            pattern, perm = canonicalize_with_perm(w)
            base = self._rows[pattern].reduced()
            cached = base if perm.is_identity() else base.apply_perm(perm)
            self._rowof_cache[w] = cached
        return cached

    def entry(self, w: Word, e: Word) -> bool:
        """The stored bit for any concrete label and column in closure."""
        key = canonicalize(w + e)
        try:
            return self.answers[key]
        except KeyError:
            raise KeyError(
                f"({w.render()}, {e.render()}) was never filled"
            ) from None

    # -- derived families -------------------------------------------------

    def rows_family(self):
        """Orbit representatives of Rows(T), deduplicated."""
        self._require_filled()
        if self._family is None:
            self._family = dedup_by_orbit(
                [self._rows[l] for l in self.all_labels()]
            )
        return self._family

    def _uppers(self):
        if self._upper_index is None:
            index = {}
            for s in self.s_labels():
                r = self._rows[s]
                index.setdefault(r.orbit_invariant(), []).append(r)
            self._upper_index = index
        return self._upper_index

    def _is_upper(self, r: Row) -> bool:
        bucket = self._uppers().get(r.orbit_invariant(), ())
        return any(orbit_equal(r, other) for other in bucket)

    def _is_ji(self, label) -> bool:
        cached = self._ji_cache.get(label)
        if cached is None:
            cached = is_join_irreducible(self._rows[label], self.rows_family())
            self._ji_cache[label] = cached
        return cached

    # -- closedness -------------------------------------------------------

    def find_closedness_defect(self) -> Optional[Word]:
        """The shortest extension label whose row is join-irreducible but
        not an upper row, in enumeration order; None when join-closed."""
        self._require_filled()
        for label in self.all_labels():
            if len(label) <= self.length:
                continue  # its row is an upper row by definition
            r = self._rows[label]
            if self._is_upper(r):
                continue
            if self._is_ji(label):
                return label
        return None

    def close_step(self, defect: Word):
        """Grow S to all word orbits up to the defect's length."""
        self.length = max(self.length, len(defect))
        if self.oracle is not None:
            self.fill()
        return self

    # -- consistency ------------------------------------------------------

    def _label_leq(self, w1: Word, w2: Word) -> bool:
        cached = self._leq_cache.get((w1, w2))
        if cached is None:
            cached = row_leq(self.row_of(w1), self.row_of(w2))
            self._leq_cache[(w1, w2)] = cached
        return cached

    def find_consistency_defect(self):
        """A tuple (s1, s2, a, e) with row(s1) <= row(s2) yet a.e telling
        their extensions apart; placements of s2 relative to s1 are
        searched so that overlapping supports are covered."""
        self._require_filled()
        labels = self.s_labels()
        tags = sorted(self.alphabet.tags)
        for s1 in labels:
            sup1 = sorted(frozenset(s1.atoms()))
            for s2 in labels:
                sup2 = sorted(frozenset(s2.atoms()))
                for inj in partial_injections(sup2, sup1):
                    perm, _ = _realize(inj, sup2, sup1)
                    s2c = apply(perm, s2)
                    if s2c == s1:
                        continue
                    if not self._label_leq(s1, s2c):
                        continue
                    defect = self._extension_defect(s1, s2c, tags)
                    if defect is not None:
                        return defect
        return None

    def _extension_defect(self, s1, s2c, tags):
        joint = frozenset(s1.atoms()) | frozenset(s2c.atoms())
        for tag in tags:
            for base in letter_patterns(tag, self.alphabet.arity(tag)):
                for inst in split_into_a_orbits(Word([base]), joint):
                    letter = inst[0]
                    w1 = s1 + letter
                    w2 = s2c + letter
                    if self._label_leq(w1, w2):
                        continue
                    r1 = self.row_of(w1)
                    r2 = self.row_of(w2)
                    for e in _joint_instances(
                        self.columns, r1.support_set, r2.support_set
                    ):
                        if r1.value(e) and not r2.value(e):
                            return (s1, s2c, letter, e)
        return None

    def consistency_step(self, defect):
        """Add the orbit of a.e (and its suffixes, keeping E suffix-closed)."""
        _, _, letter, e = defect
        self.columns.add(Word([letter]) + e)
        if self.oracle is not None:
            self.fill()
        return self

    def consistency_preorder(self):
        """Fingerprint of the row preorder on placed S x S pairs; each
        consistency step must strictly refine it."""
        self._require_filled()
        pairs = set()
        labels = self.s_labels()
        for s1 in labels:
            sup1 = sorted(frozenset(s1.atoms()))
            for s2 in labels:
                sup2 = sorted(frozenset(s2.atoms()))
                for inj in partial_injections(sup2, sup1):
                    perm, _ = _realize(inj, sup2, sup1)
                    s2c = apply(perm, s2)
                    if self._label_leq(s1, s2c):
                        pairs.add((s1, s2c))
        return frozenset(pairs)

    # -- counterexamples --------------------------------------------------

    def handle_counterexample(self, cex: Word):
        """Add the orbits of every suffix of the counterexample to E."""
        self.columns.add(canonicalize(cex))
        if self.oracle is not None:
            self.fill()
        return self

    # -- hypothesis -------------------------------------------------------

    def build_hypothesis(self, verify_preconditions=True) -> "Hypothesis":
        """The automaton of the table: states are the join-irreducible
        upper rows, transitions are all placements of a state below the
        extension row, guessing where the placement leaves the sources."""
        self._require_filled()
        if verify_preconditions:
            if self.find_closedness_defect() is not None:
                raise TableNotClosed("table is not join-closed")
            if self.find_consistency_defect() is not None:
                raise TableNotConsistent("table is not join-consistent")
        family = self.rows_family()
        chosen = []
        for s in self.s_labels():
            r = self._rows[s]
            if not self._is_ji(s):
                continue
            reduced = r.reduced()
            if any(orbit_equal(reduced, other) for _, _, other in chosen):
                continue
            chosen.append((s, r, reduced))

        states = []
        provenance = {}
        row_eps = self._rows[EMPTY_WORD]
        initial = []
        final = []
        for i, (owner, r, reduced) in enumerate(chosen):
            name = f"q{i}"
            states.append(StateOrbit(name, len(reduced.support)))
            provenance[name] = (owner, r)
            if row_leq(reduced, row_eps):
                initial.append(name)
            if reduced.value(EMPTY_WORD):
                final.append(name)

        transitions = []
        tags = sorted(self.alphabet.tags)
        for i, (owner, r, reduced) in enumerate(chosen):
            name = f"q{i}"
            regs = reduced.support
            owner_atoms = frozenset(owner.atoms())
            for tag in tags:
                for base in letter_patterns(tag, self.alphabet.arity(tag)):
                    for inst in split_into_a_orbits(
                        Word([base]),
                        frozenset(regs),
                        fresh_start=fresh_atom(owner_atoms | frozenset(regs)),
                    ):
                        letter = inst[0]
                        w = owner + letter
                        scope = frozenset(regs) | frozenset(letter.atoms)
                        for j, (_, _, cand) in enumerate(chosen):
                            for inj in partial_injections(
                                cand.support, sorted(scope)
                            ):
                                perm, inv = _realize(
                                    inj, cand.support, scope | owner_atoms
                                )
                                if not self._placed_below_extension(
                                    cand, perm, inv, w
                                ):
                                    continue
                                transitions.append(
                                    self._line(name, regs, letter, f"q{j}",
                                               tuple(perm(a) for a in cand.support))
                                )
        automaton = SymbolicAutomaton(
            self.alphabet, states, initial, final, transitions
        )
        return Hypothesis(automaton, provenance)

    def _placed_below_extension(self, cand, perm, inv, w) -> bool:
        return _placed_leq(cand, perm, inv, self.row_of(w))

    @staticmethod
    def _line(src, src_regs, letter, dst, dst_regs):
        names = {}
        for a in tuple(src_regs) + tuple(letter.atoms) + tuple(dst_regs):
            if a not in names:
                names[a] = f"x{len(names)}"
        return TransitionLine(
            src,
            tuple(names[a] for a in src_regs),
            letter.tag,
            tuple(names[a] for a in letter.atoms),
            dst,
            tuple(names[a] for a in dst_regs),
        )


@dataclass(frozen=True)
class Hypothesis:
    """A table-built automaton plus, per state orbit, the owning label."""

    automaton: SymbolicAutomaton
    provenance: dict

    def state_orbit_count(self) -> int:
        return len(self.automaton.states)


def hypothesis_agreement_violations(table: ObservationTable, hyp: Hypothesis):
    """Pairs (s, e) with s in S where simulating the hypothesis does not
    reproduce the table entry.  Empty for every hypothesis built from a
    join-closed, join-consistent table."""
    bad = []
    checked = {}
    for s in table.s_labels():
        sup = frozenset(s.atoms())
        for pattern in table.columns:
            for e in split_into_a_orbits(pattern, sup):
                key = canonicalize(s + e)
                got = checked.get(key)
                if got is None:
                    got = accepts(hyp.automaton, key)
                    checked[key] = got
                if got != table.answers[key]:
                    bad.append((s, e))
    return bad


@dataclass
class LearnBudget:
    max_equivalence: int = 50
    max_length: int = 8
    wall_time: Optional[float] = None


@dataclass
class LearnStats:
    membership_queries: int = 0
    equivalence_queries: int = 0
    closedness_rounds: int = 0
    consistency_rounds: int = 0
    final_l: int = 0
    diverged: bool = False
    wall_time: float = 0.0
    agreement_violations: int = 0

    def to_dict(self):
        d = asdict(self)
        d["wall_time"] = round(d["wall_time"], 6)
        return d


@dataclass
class LearnResult:
    hypothesis: Optional[Hypothesis]
    stats: LearnStats

    @property
    def diverged(self) -> bool:
        return self.hypothesis is None


def learn(teacher, budget: LearnBudget = None, check_agreement=True,
          log=None) -> LearnResult:
    """Run the modified learning loop against a teacher.

    Repairs consistency and closedness, builds a hypothesis, asks an
    equivalence query, and folds counterexample suffixes into the
    columns; returns the accepted hypothesis, or a diverged result when
    any budget is exhausted (the expected outcome for languages no
    residual automaton accepts).  `log`, when given, receives one line
    per loop event.
    """
    budget = budget or LearnBudget()
    stats = LearnStats()
    start = time.monotonic()
    emit = log if log is not None else (lambda line: None)
    table = ObservationTable(teacher.alphabet, oracle=teacher.membership)
    table.fill()

    def out_of_time():
        return budget.wall_time is not None and (
            time.monotonic() - start > budget.wall_time
        )

    def finish(hyp):
        stats.final_l = table.length
        stats.membership_queries = teacher.membership.query_count
        stats.wall_time = time.monotonic() - start
        stats.diverged = hyp is None
        emit("diverged" if hyp is None else "accepted")
        return LearnResult(hyp, stats)

    while True:
        while True:
            if out_of_time():
                return finish(None)
            progressed = False
            defect = table.find_closedness_defect()
            if defect is not None:
                if len(defect) > budget.max_length:
                    emit(f"not-closed {defect.render()} exceeds length budget")
                    return finish(None)
                emit(
                    f"not-closed {defect.render()} "
                    f"row={table.row(defect).render()}; growing S to length {len(defect)}"
                )
                table.close_step(defect)
                stats.closedness_rounds += 1
                progressed = True
            mismatch = table.find_consistency_defect()
            if mismatch is not None:
                s1, s2, letter, e = mismatch
                emit(
                    f"not-consistent ({s1.render()}, {s2.render()}) "
                    f"split by {letter.render()}.{e.render()}; growing E"
                )
                table.consistency_step(mismatch)
                stats.consistency_rounds += 1
                progressed = True
            if not progressed:
                break
        hyp = table.build_hypothesis(verify_preconditions=False)
        emit(f"hypothesis with {hyp.state_orbit_count()} state orbits")
        if check_agreement:
            stats.agreement_violations += len(
                hypothesis_agreement_violations(table, hyp)
            )
        if stats.equivalence_queries >= budget.max_equivalence or out_of_time():
            return finish(None)
        stats.equivalence_queries += 1
        cex = teacher.equivalence.equivalent(hyp)
        if cex is None:
            return finish(hyp)
        emit(f"counterexample {cex.render()}")
        table.handle_counterexample(cex)
