"""Annotation of words with prophetic look-ahead states and
elimination of the look-ahead from two-way transducers.

An annotated word carries at each position the unique look-ahead state
accepting the suffix from that position.  The eliminated machine runs
on annotated words directly (marked tape): each simulated step probes
one cell to the right to check the annotation is consistent with the
look-ahead's transitions, returns, and only then fires the underlying
transition.  Inconsistent annotations block; acceptance requires
annotation states from the look-ahead's final set to be read
infinitely often.
"""

from __future__ import annotations

from .buchi import BuchiAutomaton, member_up
from .twoway import TwoWayPLA, TwoWayTransducer
from .words import UPWord


class NoState(Exception):
    """No look-ahead state accepts the given suffix."""


class MultipleStates(Exception):
    """More than one look-ahead state accepts the given suffix."""


def good_annotation(p: BuchiAutomaton, x: UPWord) -> UPWord:
    """Annotate each position of x with the unique state of p accepting
    the suffix from that position.

    x is the full (endmarked, if applicable) word; the result has the
    same prefix/period shape with (symbol, state) pairs.
    """
    pre, per = x.prefix, x.period
    n = len(pre) + len(per)

    def suffix_at(i: int) -> UPWord:
        if i < len(pre):
            return UPWord(pre[i:], per)
        j = i - len(pre)
        return UPWord(per[j:], per)

    states = []
    for i in range(n):
        sfx = suffix_at(i)
        fitting = [q for q in p.states if member_up(p, sfx, from_states=[q])]
        if not fitting:
            raise NoState(str(sfx))
        if len(fitting) > 1:
            raise MultipleStates(f"{sfx}: {sorted(map(str, fitting))}")
        states.append(fitting[0])
    ann = tuple((x[i], states[i]) for i in range(n))
    return UPWord(ann[:len(pre)], ann[len(pre):])


def eliminate_lookahead(t: TwoWayPLA) -> TwoWayTransducer:
    """Two-way Buchi transducer over annotated symbols equivalent to t
    on well-annotated inputs.

    States: the original ones, probe states ("probe", r, a, p) moving
    right to inspect the next annotation, and armed states
    ("go", r, a, p) back at the original cell ready to fire.  The probe
    blocks unless the next annotation state is a look-ahead successor
    of the current one.  Final states are the armed ones whose
    annotation state is look-ahead final.
    """
    p_aut = t.lookahead.automaton
    # The machine may traverse any (symbol, state) pair appearing in a
    # consistent annotation, not only the consulted ones.
    tape_syms = {(a, p) for a in (set(t.alphabet) | {s for (_, s, _) in
                                                     p_aut.transitions})
                 for p in p_aut.states}
    tape_syms = {(a, p) for (a, p) in tape_syms
                 if a in t.alphabet or a == "^"}

    states = set(t.states)
    delta = {}
    final = set()

    probe = lambda r, a, p: ("probe", r, a, p)
    armed = lambda r, a, p: ("go", r, a, p)

    for r in t.states:
        for (a, p) in tape_syms:
            delta[(r, (a, p))] = (probe(r, a, p), (), 1)
            states.add(probe(r, a, p))

    for r in t.states:
        for (a, p) in tape_syms:
            pr = probe(r, a, p)
            ar = armed(r, a, p)
            states.add(ar)
            if p in p_aut.final:
                final.add(ar)
            for (b, p2) in tape_syms:
                if p2 in p_aut.successors(p, a):
                    delta[(pr, (b, p2))] = (ar, (), -1)

    for (q, a, p), (r, g, d) in t.delta.items():
        delta[(armed(q, a, p), (a, p))] = (r, g, d)

    return TwoWayTransducer(frozenset(tape_syms),
                            frozenset(t.output_alphabet),
                            frozenset(states), delta, t.initial,
                            frozenset(final), marked=True)
