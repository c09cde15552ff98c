"""Streaming computation of a function on an infinite input.

The streaming machine keeps two buffers: the input consumed so far and
the output committed so far.  After each input symbol it greedily
commits output symbols that are safe, where a symbol g is safe when
committed + g is a prefix of f(y) for every domain word y extending the
consumed input.  For continuous functions this makes progress; for
discontinuous ones the committed buffer can starve forever.

Safety is decided by the mismatch question: is there y with
consumed . y in dom f and the candidate output not a prefix of
f(consumed . y)?  One-way machines answer it through
universal_prefix_consistent; two-way machines through a product
two-way automaton whose domain is exactly the mismatching inputs,
converted to a Buchi automaton and tested for emptiness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .buchi import all_up_words, is_empty, pref_automaton
from .oneway import (Transducer, domain_automaton, trim_transducer,
                     universal_prefix_consistent)
from .twoway import (ENDMARKER, DomainOracle, Output, StateCapExceeded,
                     TwoWayPLA, TwoWayTransducer, domain_nba, eval_up_2way,
                     run_finite)
from .words import Word, as_word, mismatch, up_word


class DeadInput(Exception):
    """The consumed input has no extension inside the domain."""


@dataclass(frozen=True)
class StreamState:
    machine: object  # Transducer, TwoWayTransducer or TwoWayPLA
    consumed: Word = ()
    committed: Word = ()


def _letter(sym):
    # annotated tape symbols are (letter, class) pairs
    return sym[0] if isinstance(sym, tuple) else sym


def mismatch_automaton(t: TwoWayTransducer, u, v) -> TwoWayTransducer:
    """Two-way machine whose domain is exactly the inputs that start
    with u, lie in dom t, and whose image does not extend v.

    Phase one walks right comparing the first |u| tape letters with u,
    then rewinds.  Phase two replays t, matching its output against v;
    detecting a difference switches to plain replay with t's own
    acceptance, while consuming all of v without one kills the run.
    For annotated (marked) machines the comparison is on the letter
    component, so any annotation of u may be used.
    """
    u, v = as_word(u), as_word(v)
    syms = sorted(t.tape_symbols(), key=str)
    delta = {}

    def sim_target(q2, g, m):
        if mismatch(g, v[m:]) is not None:
            return ("mis", q2)
        m2 = m + len(g)
        if m2 >= len(v):
            return None  # v confirmed as a prefix: not a mismatch run
        return ("sim", q2, m2)

    def start_step(s):
        # behave as t's initial configuration on the cell-0 symbol s
        tr = t.delta.get((t.initial, s))
        if tr is None:
            return None
        q2, g, d = tr
        tgt = sim_target(q2, g, 0)
        return None if tgt is None else (tgt, g, d)

    if u:
        for s in syms:
            if _letter(s) == ENDMARKER:
                delta[(("chk", 0), s)] = (("chk", 1), (), 1)
                tr = start_step(s)
                if tr is not None:
                    delta[(("rew",), s)] = tr
            else:
                delta[(("rew",), s)] = (("rew",), (), -1)
        for i, a in enumerate(u):
            for s in syms:
                if _letter(s) != a:
                    continue
                if i + 1 < len(u):
                    delta[(("chk", i + 1), s)] = (("chk", i + 2), (), 1)
                else:
                    delta[(("chk", i + 1), s)] = (("rew",), (), -1)
        initial = ("chk", 0)
    else:
        initial = ("sim", t.initial, 0)

    for (q, s), (q2, g, d) in t.delta.items():
        delta[(("mis", q), s)] = (("mis", q2), g, d)
        for m in range(len(v)):
            tgt = sim_target(q2, g, m)
            if tgt is not None:
                delta[(("sim", q, m), s)] = (tgt, g, d)

    states = {("chk", i) for i in range(len(u) + 1)} | {("rew",)}
    states |= {("sim", q, m) for q in t.states for m in range(len(v))}
    states |= {("mis", q) for q in t.states}
    states.add(initial)
    return TwoWayTransducer(t.alphabet, t.output_alphabet,
                            frozenset(states), delta, initial,
                            frozenset(("mis", q) for q in t.final),
                            t.marked)


def _mismatch_exists_2way(t: TwoWayTransducer, u, v, state_cap: int,
                          ext_bound: int) -> Tuple[bool, bool]:
    """(answer, exact).  The inexact route samples bounded ultimately
    periodic extensions and is sound for yes-answers only."""
    u, v = as_word(u), as_word(v)
    if not v:
        return False, True
    if len(t.states) <= state_cap:
        try:
            a = mismatch_automaton(t, u, v)
            nba = domain_nba(a, state_cap=len(a.states),
                             nba_state_cap=20000)
            return not is_empty(nba), True
        except StateCapExceeded:
            pass
    for e in all_up_words(t.alphabet, ext_bound, ext_bound):
        x = up_word(u + e.prefix, e.period)
        if x.take(len(u)) != u:
            continue
        got = eval_up_2way(t, x)
        if isinstance(got, Output) and \
                mismatch(v, got.value.take(len(v))) is not None:
            return True, False
    return False, False


def mismatch_exists(machine, u, v, state_cap: int = 12,
                    ext_bound: int = 4) -> bool:
    """Is there y with u.y in dom f and v not a prefix of f(u.y)?"""
    u, v = as_word(u), as_word(v)
    if isinstance(machine, Transducer):
        return not universal_prefix_consistent(machine, u, v)
    if isinstance(machine, TwoWayPLA):
        from .lookahead import eliminate_lookahead
        elim = eliminate_lookahead(machine)
        return _mismatch_exists_2way(elim, u, v, state_cap, ext_bound)[0]
    return _mismatch_exists_2way(machine, u, v, state_cap, ext_bound)[0]


def _extendable(machine, w, state_cap: int, ext_bound: int) -> bool:
    """Does some domain word extend the finite input w?"""
    w = as_word(w)
    if isinstance(machine, Transducer):
        return pref_automaton(domain_automaton(machine)).accepts(w)
    if isinstance(machine, TwoWayPLA):
        for e in all_up_words(machine.alphabet, ext_bound, ext_bound):
            x = up_word(w + e.prefix, e.period)
            if x.take(len(w)) == w and \
                    isinstance(eval_up_2way(machine, x), Output):
                return True
        return False
    return DomainOracle(machine, state_cap=state_cap,
                        ext_bound=ext_bound).pref_member(w)


def _commit_cap(machine, consumed: Word) -> int:
    """How far the committed buffer may grow: the most output the
    machine itself has produced on the consumed input.  Once the image
    is fully determined every prefix is safe, so without this cap the
    greedy commit loop would never stop."""
    if isinstance(machine, Transducer):
        t = trim_transducer(machine)
        best = {q: 0 for q in t.initial}
        for a in consumed:
            nxt = {}
            for q, n in best.items():
                for (r, g) in t.arcs(q, a):
                    if n + len(g) > nxt.get(r, -1):
                        nxt[r] = n + len(g)
            best = nxt
        return max(best.values(), default=0)
    if isinstance(machine, TwoWayPLA):
        per_step = max((len(g) for (_, g, _) in machine.delta.values()),
                       default=0)
        return len(consumed) * per_step
    return len(run_finite(machine, consumed).output)


def stream_start(machine) -> StreamState:
    return StreamState(machine)


def stream_step(s: StreamState, a, state_cap: int = 12,
                ext_bound: int = 4) -> Tuple[StreamState, Word]:
    """Feed one input symbol; returns the new state and the output
    symbols that became safe to commit (possibly none).

    Raises DeadInput when the consumed input stops being a prefix of
    any domain word.
    """
    consumed = s.consumed + (a,)
    if not _extendable(s.machine, consumed, state_cap, ext_bound):
        raise DeadInput("".join(map(str, consumed)))
    committed = s.committed
    emitted = []
    letters = sorted(s.machine.output_alphabet)
    cap = _commit_cap(s.machine, consumed)
    progress = True
    while progress and len(committed) < cap:
        progress = False
        for g in letters:
            cand = committed + (g,)
            if not mismatch_exists(s.machine, consumed, cand,
                                   state_cap, ext_bound):
                committed = cand
                emitted.append(g)
                progress = True
                break
    return StreamState(s.machine, consumed, committed), tuple(emitted)


def stream_feed(machine, symbols) -> Tuple[StreamState, Word]:
    """Run a whole finite input through stream_step."""
    s = stream_start(machine)
    out = []
    for a in symbols:
        s, emitted = stream_step(s, a)
        out.extend(emitted)
    return s, tuple(out)
