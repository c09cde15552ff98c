"""One-way Buchi transducers: evaluation, functionality, continuity.

A transducer transition is (state, input symbol, target, output word).
The realized function maps each accepted omega-word to the output of
its accepting run; the transducers handled here are assumed functional
(checkable with functionality_check).

Continuity and uniform continuity are decided by searching for the
structural bad pattern: two runs on a common prefix u followed by
synchronized loops on v whose outputs already disagree (or are forced
to disagree by a tail w on the second run).  Output comparison along
the paired runs tracks the leader's pending output, clamped at a delay
bound; a clamped (overflowed) comparison is treated as unknown rather
than as a mismatch, so the search stays sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Hashable, Iterable, Optional, Tuple

from .buchi import BuchiAutomaton, Lasso, find_lasso, lasso_word
from .buchi import trim as buchi_trim
from .words import UPWord, Word, as_word, mismatch, up_word

State = Hashable


class EpsilonLoopOutput(Exception):
    """The only accepting runs produce a finite output."""


@dataclass(frozen=True)
class Transducer:
    alphabet: FrozenSet
    output_alphabet: FrozenSet
    states: FrozenSet[State]
    transitions: FrozenSet[Tuple[State, object, State, Word]]
    initial: FrozenSet[State]
    final: FrozenSet[State]

    def __post_init__(self):
        for (q, a, r, g) in self.transitions:
            if q not in self.states or r not in self.states:
                raise ValueError(f"transition uses unknown state: {(q, a, r, g)}")
            if a not in self.alphabet:
                raise ValueError(f"unknown input symbol in {(q, a, r, g)}")
            if not isinstance(g, tuple):
                raise ValueError(f"output must be a symbol tuple in {(q, a, r, g)}")
            if any(c not in self.output_alphabet for c in g):
                raise ValueError(f"unknown output symbol in {(q, a, r, g)}")
        if not self.initial <= self.states or not self.final <= self.states:
            raise ValueError("initial/final states must be states")

    def arcs(self, q: State, a) -> Iterable[Tuple[State, Word]]:
        return [(r, g) for (p, b, r, g) in self.transitions
                if p == q and b == a]

    @property
    def max_output_len(self) -> int:
        return max((len(g) for (_, _, _, g) in self.transitions), default=0)


def transducer(alphabet, output_alphabet, states, transitions,
               initial, final) -> Transducer:
    """Build a Transducer, coercing output words given as strings."""
    trans = frozenset((q, a, r, as_word(g)) for (q, a, r, g) in transitions)
    return Transducer(frozenset(alphabet), frozenset(output_alphabet),
                      frozenset(states), trans,
                      frozenset(initial), frozenset(final))


def domain_automaton(t: Transducer) -> BuchiAutomaton:
    return BuchiAutomaton(
        t.alphabet, t.states,
        frozenset((q, a, r) for (q, a, r, _) in t.transitions),
        t.initial, t.final)


def trim_transducer(t: Transducer) -> Transducer:
    keep = buchi_trim(domain_automaton(t)).states
    return Transducer(
        t.alphabet, t.output_alphabet, frozenset(keep),
        frozenset(tr for tr in t.transitions
                  if tr[0] in keep and tr[2] in keep),
        t.initial & keep, t.final & keep)


# ---------------------------------------------------------------------------
# Evaluation on UP words


def eval_up(t: Transducer, x: UPWord) -> Optional[UPWord]:
    """Value of the realized function on x, or None when x is not in
    the domain.  Raises EpsilonLoopOutput when x is accepted but every
    accepting run emits only finitely many symbols."""
    p, qn = len(x.prefix), len(x.period)
    n = p + qn

    def nxt(i):
        return i + 1 if i + 1 < n else p

    def succ(node):
        q, i = node
        return [(g, (r, nxt(i))) for (r, g) in t.arcs(q, x[i])]

    starts = [(q, 0) for q in t.initial]
    plain = find_lasso(starts, succ, lambda nd: nd[0] in t.final)
    if plain is None:
        return None

    # Need an accepting loop that emits something; hunt per final node
    # with a produced-output flag folded into the cycle search.
    def succ_flag(node):
        (q, i), flag = node
        return [(g, ((r, nxt(i)), flag or len(g) > 0))
                for (r, g) in t.arcs(q, x[i])]

    # Stem to a final node f, then a cycle f -> f with the flag turned on;
    # the inner find_lasso's stem is exactly that cycle.
    for f_state in t.final:
        for i in range(n):
            f = (f_state, i)
            stem = _path_between(starts, f, succ)
            if stem is None:
                continue
            cyc = find_lasso([(f, False)], succ_flag,
                             lambda nd: nd[0] == f and nd[1])
            if cyc is not None:
                # cyc's "stem" is the cycle itself since its final test
                # only passes back at f with output seen.
                loop_out = tuple(c for g in cyc.stem_labels for c in g)
                stem_out = tuple(c for g in stem for c in g)
                if loop_out:
                    return up_word(stem_out, loop_out)
    raise EpsilonLoopOutput(str(x))


def _path_between(starts, target, succ):
    """Labels of some path from a start node to target, or None."""
    if target in starts:
        return ()
    parent = {}
    seen = set(starts)
    queue = list(starts)
    while queue:
        nd = queue.pop(0)
        for (lab, m) in succ(nd):
            if m not in seen:
                seen.add(m)
                parent[m] = (nd, lab)
                if m == target:
                    labels = []
                    k = m
                    while k in parent:
                        k, l2 = parent[k]
                        labels.append(l2)
                    return tuple(reversed(labels))
                queue.append(m)
    return None


# ---------------------------------------------------------------------------
# Paired-run output comparison

MM = ("mm",)   # outputs already disagree at some position
OF = ("of",)   # leader's pending output overflowed the bound: unknown
EQUAL = (1, ())


def delay_bound(t: Transducer) -> int:
    """Pending-output clamp for paired-run searches.  Two runs of a
    functional transducer on a common input stay within this delay."""
    return len(t.states) ** 2 * max(t.max_output_len, 1) + 1


def advance_status(status, g1: Word, g2: Word, bound: int):
    """Update the comparison status after copy 1 emits g1, copy 2 g2.

    (side, p) means the side's total output leads the other's by p.
    Mismatch and overflow are absorbing.
    """
    if status == MM or status == OF:
        return status
    side, p = status
    lead, chase = (p + g1, g2) if side == 1 else (p + g2, g1)
    if mismatch(chase, lead) is not None:
        return MM
    if len(chase) <= len(lead):
        ns = (side, lead[len(chase):])
    else:
        ns = (3 - side, chase[len(lead):])
    if not ns[1]:
        return EQUAL
    return OF if len(ns[1]) > bound else ns


# ---------------------------------------------------------------------------
# Functionality


@dataclass(frozen=True)
class FunctionalityCounterexample:
    word: UPWord
    output1: UPWord
    output2: UPWord


def functionality_check(t: Transducer, bound: Optional[int] = None
                        ) -> Optional[FunctionalityCounterexample]:
    """None if t is functional; otherwise an accepted UP word with two
    accepting runs whose (infinite) outputs differ.

    Runs with finite total output are not compared; eval_up surfaces
    those separately as EpsilonLoopOutput.

    A bound below delay_bound(t) keeps the search small but may reject
    functional machines whose paired runs drift further than that; a
    None verdict stays trustworthy either way.
    """
    t = trim_transducer(t)
    if bound is None:
        bound = delay_bound(t)
    final = t.final

    def succ(node):
        q1, q2, status, ph = node
        nph = (1 if q1 in final else 0) if ph == 0 else \
              (0 if q2 in final else 1)
        out = []
        for (p, a, r1, g1) in t.transitions:
            if p != q1:
                continue
            for (r2, g2) in t.arcs(q2, a):
                ns = advance_status(status, g1, g2, bound)
                out.append(((a, g1, g2), (r1, r2, ns, nph)))
        return out

    init = [(p1, p2, EQUAL, 0) for p1 in t.initial for p2 in t.initial]
    lasso = find_lasso(
        init, succ,
        lambda n: n[2] in (MM, OF) and n[3] == 0 and n[0] in final)
    if lasso is None:
        return None
    word = up_word([l[0] for l in lasso.stem_labels],
                   [l[0] for l in lasso.loop_labels])
    out1 = _chunks_to_up([l[1] for l in lasso.stem_labels],
                         [l[1] for l in lasso.loop_labels])
    out2 = _chunks_to_up([l[2] for l in lasso.stem_labels],
                         [l[2] for l in lasso.loop_labels])
    return FunctionalityCounterexample(word, out1, out2)


def _chunks_to_up(stem_chunks, loop_chunks) -> Optional[UPWord]:
    stem = tuple(c for g in stem_chunks for c in g)
    loop = tuple(c for g in loop_chunks for c in g)
    if not loop:
        return None
    return up_word(stem, loop)


# ---------------------------------------------------------------------------
# Continuity


@dataclass(frozen=True)
class ContinuityWitness:
    """Structural evidence of a discontinuity at limit = u v^omega.

    The perturbed inputs u v^n w z, with z an accepting continuation
    from the second run's end state, converge to the limit while their
    outputs keep disagreeing at mismatch_pos with the output on the
    limit (cont) or on u v^n w1 z1 with z1 accepted past the first
    run's tail w1 (ucont, where the limit may fall outside the domain).
    """
    u: Word
    v: Word
    w: Word
    w1: Word
    out_u1: Word
    out_u2: Word
    out_w1: Word
    out_w2: Word
    continuation: UPWord
    continuation1: UPWord
    limit: UPWord
    mismatch_pos: int


def decide_continuity(t: Transducer, variant: str = "cont"
                      ) -> Optional[ContinuityWitness]:
    """None when the realized function is (uniformly) continuous on its
    domain; otherwise a re-checkable witness.

    variant "cont" requires the limit u v^omega to be in the domain;
    "ucont" does not (uniform continuity also fails at limits outside
    the domain as long as both runs stay alive).
    """
    if variant not in ("cont", "ucont"):
        raise ValueError(variant)
    t = trim_transducer(t)
    if not t.initial:
        return None
    bound = delay_bound(t)
    need_final = (variant == "cont")

    # Stage A: explore paired runs on a common input, tracking statuses.
    def succ(node):
        q1, q2, status = node
        out = []
        for (p, a, r1, g1) in t.transitions:
            if p != q1:
                continue
            for (r2, g2) in t.arcs(q2, a):
                ns = advance_status(status, g1, g2, bound)
                out.append(((a, g1, g2), (r1, r2, ns)))
        return out

    init = [(p1, p2, EQUAL) for p1 in t.initial for p2 in t.initial]
    parent = {}
    order = []
    seen = set(init)
    queue = list(init)
    while queue:
        n = queue.pop(0)
        order.append(n)
        for (lab, m) in succ(n):
            if m not in seen:
                seen.add(m)
                parent[m] = (n, lab)
                queue.append(m)

    def labels_to(n):
        labs = []
        while n in parent:
            n, lab = parent[n]
            labs.append(lab)
        return tuple(reversed(labs))

    for node in order:
        q1, q2, status = node
        if status == MM:
            cyc = _pair_cycle(t, q1, q2, need_final)
            if cyc is None:
                continue
            return _build_witness(t, labels_to(node), cyc,
                                  w1_labels=(), r1=q1,
                                  w_labels=(), r2=q2)
        if status == OF:
            continue
        if status[0] == 1 and status[1]:
            pending = status[1]
            cyc = _pair_cycle(t, q1, q2, need_final, eps2=True)
            if cyc is not None:
                tail = _mismatching_tail(t, q2, pending)
                if tail is not None:
                    w_labels, r2 = tail
                    return _build_witness(t, labels_to(node), cyc,
                                          w1_labels=(), r1=q1,
                                          w_labels=w_labels, r2=r2)
        if variant == "ucont":
            # Both loops silent, mismatching tails on both sides.
            cyc = _pair_cycle(t, q1, q2, need_final=False,
                              eps1=True, eps2=True)
            if cyc is None:
                continue
            tails = _pair_mismatching_tails(t, q1, q2, status, bound)
            if tails is None:
                continue
            w1_labels, r1, w_labels, r2 = tails
            return _build_witness(t, labels_to(node), cyc,
                                  w1_labels, r1, w_labels, r2)
    return None


def _build_witness(t, u_labels, v_labels, w1_labels, r1, w_labels, r2):
    u = tuple(l[0] for l in u_labels)
    out_u1 = tuple(c for l in u_labels for c in l[1])
    out_u2 = tuple(c for l in u_labels for c in l[2])
    v = tuple(l[0] for l in v_labels)
    w = tuple(l[0] for l in w_labels)
    w1 = tuple(l[0] for l in w1_labels)
    out_w1 = tuple(c for l in w1_labels for c in l[1])
    out_w2 = tuple(c for l in w_labels for c in l[1])
    cont_lasso = _accepting_continuation(t, r2)
    cont1 = _accepting_continuation(t, r1)
    pos = mismatch(out_u1, out_u2)
    if pos is None:
        pos = mismatch(out_u1 + out_w1, out_u2 + out_w2)
    assert pos is not None
    return ContinuityWitness(u, v, w, w1, out_u1, out_u2, out_w1, out_w2,
                             cont_lasso, cont1, up_word(u, v), pos)


def _accepting_continuation(t: Transducer, q) -> UPWord:
    """Input UP word accepted from q (exists by trimness)."""
    def succ(s):
        return [(a, r) for (p, a, r, _) in t.transitions if p == s]
    lasso = find_lasso([q], succ, lambda s: s in t.final)
    assert lasso is not None, "state not trim"
    return lasso_word(lasso)


def _pair_cycle(t, q1, q2, need_final, eps1=False, eps2=False):
    """Simultaneous input loop at (q1, q2), as (a, g1, g2) labels.

    With need_final the first copy's loop must pass a final state; with
    eps1/eps2 the corresponding copy must emit nothing along the loop.
    """
    start_flag = (q1 in t.final) if need_final else True
    start = ((q1, q2), start_flag)
    target = ((q1, q2), True)

    def succ(node):
        (s1, s2), flag = node
        out = []
        for (p, a, r1, g1) in t.transitions:
            if p != s1 or (eps1 and g1):
                continue
            for (r2, g2) in t.arcs(s2, a):
                if eps2 and g2:
                    continue
                nf = flag or (not need_final) or (r1 in t.final)
                out.append(((a, g1, g2), ((r1, r2), nf)))
        return out

    # Path of length >= 1 from start back to target.
    parent = {}
    seen = set()
    queue = []
    for (lab, m) in succ(start):
        if m == target:
            return (lab,)
        if m not in seen:
            seen.add(m)
            parent[m] = (None, lab)
            queue.append(m)
    while queue:
        n = queue.pop(0)
        for (lab, m) in succ(n):
            if m == target:
                labs = [lab]
                k = n
                while k is not None:
                    k2, l2 = parent[k]
                    labs.append(l2)
                    k = k2
                return tuple(reversed(labs))
            if m not in seen:
                seen.add(m)
                parent[m] = (n, lab)
                queue.append(m)
    return None


def _mismatching_tail(t, q2, pending: Word):
    """Path from q2 whose output mismatches pending within its length.

    Returns ((a, g) labels, end state) or None.  Branches whose output
    consistently covers all of pending can never mismatch and are cut.
    """
    start = (q2, 0)
    parent = {}
    seen = {start}
    queue = [start]
    while queue:
        (s, j) = queue.pop(0)
        for (p, a, r, g) in t.transitions:
            if p != s:
                continue
            rest = pending[j:]
            m = mismatch(g, rest)
            if m is not None:
                labs = [(a, g)]
                k = (s, j)
                while k in parent:
                    k, l2 = parent[k]
                    labs.append(l2)
                return tuple(reversed(labs)), r
            if j + len(g) >= len(pending):
                continue
            node = (r, j + len(g))
            if node not in seen:
                seen.add(node)
                parent[node] = ((s, j), (a, g))
                queue.append(node)
    return None


def _pair_mismatching_tails(t, q1, q2, status, bound):
    """Independent tails w1 from q1 and w2 from q2 whose outputs,
    appended to the pending comparison status, mismatch.

    Returns (w1 labels, r1, w2 labels, r2) with (a, g) labels, or None.
    Interleaves single-side moves; the comparison status only depends
    on the output totals, not the interleaving.
    """
    start = (q1, q2, status)
    parent = {}
    seen = {start}
    queue = [start]
    while queue:
        node = queue.pop(0)
        (s1, s2, st) = node
        moves = [(1, (a, g), (r, s2)) for (p, a, r, g) in t.transitions
                 if p == s1]
        moves += [(2, (a, g), (s1, r)) for (p, a, r, g) in t.transitions
                  if p == s2]
        for side, lab, (n1, n2) in moves:
            g = lab[1]
            st2 = advance_status(st, g if side == 1 else (),
                                 g if side == 2 else (), bound)
            if st2 == OF:
                continue
            nxt = (n1, n2, st2)
            if st2 == MM:
                labs = [(side, lab)]
                k = node
                while k in parent:
                    k, l2 = parent[k]
                    labs.append(l2)
                labs.reverse()
                w1 = tuple(l for (sd, l) in labs if sd == 1)
                w2 = tuple(l for (sd, l) in labs if sd == 2)
                return w1, n1, w2, n2
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = (node, (side, lab))
                queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# Prefix consistency for streaming


def universal_prefix_consistent(t: Transducer, u, w) -> bool:
    """Is w a prefix of f(x) for every x in dom f extending input u?

    Decided exactly on the trimmed transducer: any reachable run whose
    output disagrees with w at some position extends to an accepting
    run (trimness), so consistency holds iff no disagreement is
    reachable.
    """
    u, w = as_word(u), as_word(w)
    t = trim_transducer(t)
    # Read u, tracking how much of w each run's output has matched.
    # ("ext",) marks runs whose output already covers all of w; a run
    # that mismatches mid-u only matters if it survives all of u.
    cur = {(q, ("pfx", 0)) for q in t.initial}
    for a in u:
        nxt = set()
        for (q, st) in cur:
            for (r, g) in t.arcs(q, a):
                nxt.add((r, _consume_against(st, g, w)))
        cur = nxt
    # Extensions of u: only runs still short of w can still disagree.
    for (q, st) in cur:
        if st == MM:
            return False
        if st == ("ext",):
            continue
        _, k = st
        if _mismatching_tail(t, q, w[k:]) is not None:
            return False
    return True


def _consume_against(st, g: Word, w: Word):
    if st == ("ext",) or st == MM:
        return st
    _, k = st
    m = mismatch(g, w[k:])
    if m is not None:
        return MM
    k2 = k + len(g)
    return ("ext",) if k2 >= len(w) else ("pfx", k2)


def mismatch_exists(t: Transducer, u, w) -> bool:
    """Some x in dom f extends u with w not a prefix of f(x)."""
    return not universal_prefix_consistent(t, u, w)
