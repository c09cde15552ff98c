"""Bounded witness search for non-continuity of regular functions
given as two-way transducers (with or without prophetic look-ahead).

A witness is a pair of triples (u1, u2, u3), (u1', u2', u3') whose u1
and u2 parts have the same input projection, whose middles are
idempotent loops in context, and whose iteration-stable output prefixes
rho(u1, u2, u3) and rho(u1', u2', u3') disagree at some position: the
input families u1 u2^n u3 ... and u1' u2'^n u3' ... then converge to a
common limit while the outputs stay apart.  The continuity variant
additionally requires the limit itself to be in the domain.  A returned
witness proves non-(uniform-)continuity; exhausting the bounds proves
nothing.

Machines with look-ahead are searched after look-ahead elimination, so
the words carry look-ahead annotations and "same projection" is a real
constraint; for plain machines the projection is the identity and only
the u3 parts can differ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .buchi import all_up_words
from .lookahead import (MultipleStates, NoState, eliminate_lookahead,
                        good_annotation)
from .loops import NotIdempotent, NotInPrefDomain, is_idempotent, rho
from .twoway import (ENDMARKER, DomainOracle, Output, TwoWayPLA,
                     TwoWayTransducer, eval_up_2way, run_finite)
from .words import Word, mismatch, up_word


@dataclass(frozen=True)
class SearchBounds:
    max_len_u1: int = 3
    max_len_u2: int = 3
    max_len_u3: int = 3
    verify_n: int = 4

    def __post_init__(self):
        if min(self.max_len_u1, self.max_len_u2, self.max_len_u3,
               self.verify_n) < 1:
            raise ValueError("all bounds must be at least 1")


@dataclass(frozen=True)
class RegularWitness:
    """Two triples with equal input projections on the u1 and u2 parts
    whose stable output prefixes disagree at mismatch_position.  For
    machines with look-ahead the symbols are (letter, class) pairs and
    u1 starts with the annotated endmarker."""
    u1: Word
    u2: Word
    u3: Word
    u1p: Word
    u2p: Word
    u3p: Word
    mismatch_position: int
    variant: str  # "cont" or "ucont"


@dataclass(frozen=True)
class NotContinuous:
    witness: RegularWitness
    pref_exact: bool


@dataclass(frozen=True)
class NoWitnessUpTo:
    bounds: SearchBounds
    pref_exact: bool


def _words_up_to(letters, lo: int, hi: int):
    for k in range(lo, hi + 1):
        for w in itertools.product(letters, repeat=k):
            yield w


def alphabet_automorphisms(t: TwoWayTransducer) -> List[Dict]:
    """Input-alphabet permutations that leave the transition table
    unchanged when applied to both read and written symbols."""
    letters = sorted(t.alphabet)
    identity = {a: a for a in letters}
    if len(letters) > 6:
        return [identity]
    found = []
    for image in itertools.permutations(letters):
        m = dict(zip(letters, image))
        moved = {(q, m.get(a, a)): (r, tuple(m.get(c, c) for c in g), d)
                 for (q, a), (r, g, d) in t.delta.items()}
        if moved == t.delta:
            found.append(m)
    return found


def _apply(m: Dict, w: Word) -> Word:
    return tuple(m.get(s, s) for s in w)


class _PlainSpace:
    """Candidate enumeration for a machine without look-ahead.  Words
    are plain, the projection is the identity, and (u1, u2) pairs are
    quotiented by alphabet automorphisms: any witness maps to a witness
    under an automorphism, so searching one representative per orbit
    loses nothing."""

    def __init__(self, t: TwoWayTransducer, state_cap: int = 12,
                 ext_bound: int = 4):
        self.machine = t
        self.oracle = DomainOracle(t, state_cap=state_cap,
                                   ext_bound=ext_bound)
        self.pref_exact = self.oracle.exact
        self.letters = sorted(t.alphabet)
        self.autos = alphabet_automorphisms(t)

    def project(self, w: Word) -> Word:
        return tuple(w)

    def pref_member(self, w: Word) -> bool:
        return self.oracle.pref_member(w)

    def limit_in_domain(self, u1: Word, u2: Word) -> bool:
        return isinstance(eval_up_2way(self.machine, up_word(u1, u2)),
                          Output)

    def groups(self, bounds: SearchBounds):
        pairs = []
        for u1 in _words_up_to(self.letters, 0, bounds.max_len_u1):
            for u2 in _words_up_to(self.letters, 1, bounds.max_len_u2):
                if min((_apply(m, u1), _apply(m, u2))
                       for m in self.autos) == (u1, u2):
                    pairs.append((u1, u2))
        pairs.sort(key=lambda p: (len(p[0]) + len(p[1]), p))
        for pair in pairs:
            yield pair, [pair]

    def thirds(self, u1: Word, u2: Word, bounds: SearchBounds):
        return list(_words_up_to(self.letters, 0, bounds.max_len_u3))


class _AnnotatedSpace:
    """Candidate enumeration for a machine with prophetic look-ahead,
    running on the eliminated machine over (letter, class) symbols.
    Only annotation chains consistent with the look-ahead's transitions
    are generated; u2 must additionally be able to follow itself."""

    def __init__(self, t: TwoWayPLA, state_cap: int = 12,
                 ext_bound: int = 4):
        self.original = t
        self.machine = eliminate_lookahead(t)
        self.p_aut = t.lookahead.automaton
        self.letters = sorted(t.alphabet)
        self.ext_bound = ext_bound
        # Pref(dom) goes through bounded ultimately-periodic extensions
        # of the projected word: sound for yes-answers only.
        self.pref_exact = False

    def project(self, w: Word) -> Word:
        return tuple(a for (a, _) in w)

    def _next_symbols(self, last) -> List:
        a, p = last
        out = []
        for p2 in sorted(self.p_aut.successors(p, a)):
            for b in self.letters:
                if self.p_aut.successors(p2, b):
                    out.append((b, p2))
        out.sort()
        return out

    def _chains(self, starts, lo: int, hi: int) -> List[Word]:
        level = [(s,) for s in sorted(starts)]
        out = []
        for ln in range(1, hi + 1):
            if ln >= lo:
                out.extend(level)
            if ln < hi:
                level = [w + (s,) for w in level
                         for s in self._next_symbols(w[-1])]
        return out

    def pref_member(self, w: Word) -> bool:
        base = self.project(w)[1:]
        for e in all_up_words(self.letters, self.ext_bound, self.ext_bound):
            x = up_word(base + e.prefix, e.period)
            if x.take(len(base)) != base:
                continue
            if not isinstance(eval_up_2way(self.original, x), Output):
                continue
            marked = up_word((ENDMARKER,) + x.prefix, x.period)
            try:
                ann = good_annotation(self.p_aut, marked)
            except (NoState, MultipleStates):
                continue
            if all(ann[i] == w[i] for i in range(len(w))):
                return True
        return False

    def limit_in_domain(self, u1: Word, u2: Word) -> bool:
        x = up_word(self.project(u1)[1:], self.project(u2))
        return isinstance(eval_up_2way(self.original, x), Output)

    def groups(self, bounds: SearchBounds):
        starts = [(ENDMARKER, p) for p in sorted(self.p_aut.states)
                  if self.p_aut.successors(p, ENDMARKER)]
        grouped: Dict[Tuple[Word, Word], List] = {}
        for u1 in self._chains(starts, 1, bounds.max_len_u1):
            for u2 in self._chains(self._next_symbols(u1[-1]), 1,
                                   bounds.max_len_u2):
                if u2[0] not in self._next_symbols(u2[-1]):
                    continue
                key = (self.project(u1), self.project(u2))
                grouped.setdefault(key, []).append((u1, u2))
        for key in sorted(grouped,
                          key=lambda k: (len(k[0]) + len(k[1]), k)):
            yield key, sorted(grouped[key])

    def thirds(self, u1: Word, u2: Word, bounds: SearchBounds):
        return [()] + self._chains(self._next_symbols(u2[-1]), 1,
                                   bounds.max_len_u3)


def _make_space(t, state_cap: int = 12, ext_bound: int = 4):
    if isinstance(t, TwoWayPLA):
        return _AnnotatedSpace(t, state_cap, ext_bound)
    return _PlainSpace(t, state_cap, ext_bound)


def _verify(space, w: RegularWitness, n: int) -> bool:
    m = space.machine
    if space.project(w.u1) != space.project(w.u1p):
        return False
    if space.project(w.u2) != space.project(w.u2p):
        return False
    triples = ((w.u1, w.u2, w.u3), (w.u1p, w.u2p, w.u3p))
    rhos = []
    for (a, b, c) in triples:
        if not b or not is_idempotent(m, a, b, c):
            return False
        if not space.pref_member(a + b + c):
            return False
        try:
            rhos.append(rho(m, a, b, c))
        except (NotIdempotent, NotInPrefDomain):
            return False
    i = w.mismatch_position
    if i >= len(rhos[0]) or i >= len(rhos[1]) or rhos[0][i] == rhos[1][i]:
        return False
    if w.variant == "cont" and not space.limit_in_domain(w.u1, w.u2):
        return False
    # the mismatch persists through pumping
    for k in range(1, n + 1):
        outs = []
        for (a, b, c) in triples:
            run = run_finite(m, a + b * k + c)
            if run.exit != "right_end" or i >= len(run.output):
                return False
            outs.append(run.output[i])
        if outs[0] == outs[1]:
            return False
    return True


def verify_witness(t, w: RegularWitness, n: int = 4,
                   state_cap: int = 12, ext_bound: int = 4) -> bool:
    """Recheck every witness condition and that the output mismatch
    persists at the witness position for 1..n copies of the loops."""
    return _verify(_make_space(t, state_cap, ext_bound), w, n)


def search_witness(t, variant: str, bounds: SearchBounds = SearchBounds(),
                   state_cap: int = 12, ext_bound: int = 4):
    """Enumerate candidate triples within the length bounds and return
    the first verified witness, or NoWitnessUpTo(bounds).

    The enumeration is deterministic: candidate (u1, u2) pairs grouped
    by projection and ordered by total length then lexicographically,
    u3 parts likewise within each group.
    """
    if variant not in ("cont", "ucont"):
        raise ValueError(f"unknown variant {variant!r}")
    space = _make_space(t, state_cap, ext_bound)
    m = space.machine
    pref_cache: Dict[Word, bool] = {}

    def pref(w):
        if w not in pref_cache:
            pref_cache[w] = space.pref_member(w)
        return pref_cache[w]

    for _, pairs in space.groups(bounds):
        if variant == "cont" and not space.limit_in_domain(*pairs[0]):
            continue
        entries = []
        for (u1, u2) in pairs:
            for u3 in space.thirds(u1, u2, bounds):
                try:
                    r = rho(m, u1, u2, u3)
                except (NotIdempotent, NotInPrefDomain):
                    continue
                entries.append((u1, u2, u3, r))
        for e1, e2 in itertools.combinations(entries, 2):
            pos = mismatch(e1[3], e2[3])
            if pos is None:
                continue
            if not pref(e1[0] + e1[1] + e1[2]):
                continue
            if not pref(e2[0] + e2[1] + e2[2]):
                continue
            w = RegularWitness(e1[0], e1[1], e1[2], e2[0], e2[1], e2[2],
                               pos, variant)
            if _verify(space, w, bounds.verify_n):
                return NotContinuous(w, space.pref_exact)
    return NoWitnessUpTo(bounds, space.pref_exact)
