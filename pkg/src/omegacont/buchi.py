"""Nondeterministic Buchi automata and the lasso searches built on them.

Transitions are a set of (state, symbol, state) triples.  Acceptance:
some run visits a final state infinitely often.  Most decision
procedures here reduce to finding an accepting lasso in a derived
graph, so a generic search over (node, label, node) successor functions
is provided and reused by the other modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Hashable, Iterable, Optional, Tuple

from .words import UPWord, Word, as_word

State = Hashable
Node = Hashable


@dataclass(frozen=True)
class BuchiAutomaton:
    alphabet: FrozenSet
    states: FrozenSet[State]
    transitions: FrozenSet[Tuple[State, object, State]]
    initial: FrozenSet[State]
    final: FrozenSet[State]

    def __post_init__(self):
        for (q, a, r) in self.transitions:
            if q not in self.states or r not in self.states:
                raise ValueError(f"transition {(q, a, r)} uses unknown state")
            if a not in self.alphabet:
                raise ValueError(f"transition {(q, a, r)} uses unknown symbol")
        if not self.initial <= self.states or not self.final <= self.states:
            raise ValueError("initial/final states must be states")

    def successors(self, q: State, a) -> FrozenSet[State]:
        return frozenset(r for (p, b, r) in self.transitions
                         if p == q and b == a)


def buchi(alphabet, states, transitions, initial, final) -> BuchiAutomaton:
    return BuchiAutomaton(frozenset(alphabet), frozenset(states),
                          frozenset(transitions), frozenset(initial),
                          frozenset(final))


@dataclass(frozen=True)
class Lasso:
    """An accepting lasso.

    stem_nodes[0] is initial, stem_nodes[-1] is the final node f; the
    loop starts at f and returns to it: loop_nodes lists the nodes after
    each loop edge, ending with f itself.  Label tuples align with the
    edges taken, so len(stem_labels) == len(stem_nodes) - 1 and
    len(loop_labels) == len(loop_nodes) >= 1.
    """
    stem_nodes: Tuple[Node, ...]
    stem_labels: Tuple[object, ...]
    loop_nodes: Tuple[Node, ...]
    loop_labels: Tuple[object, ...]


def find_lasso(initial_nodes: Iterable[Node],
               successors: Callable[[Node], Iterable[Tuple[object, Node]]],
               is_final: Callable[[Node], bool]) -> Optional[Lasso]:
    """Accepting lasso search in an implicit labeled graph.

    Finds a path from an initial node to a final node f together with a
    non-empty cycle f -> ... -> f.  Nodes must be hashable; the graph
    reachable from the initial nodes must be finite.
    """
    parent = {}
    order = []
    queue = list(dict.fromkeys(initial_nodes))
    seen = set(queue)
    while queue:
        n = queue.pop(0)
        order.append(n)
        for (lab, m) in successors(n):
            if m not in seen:
                seen.add(m)
                parent[m] = (n, lab)
                queue.append(m)

    def path_to(n):
        nodes, labels = [n], []
        while n in parent:
            n, lab = parent[n]
            nodes.append(n)
            labels.append(lab)
        return tuple(reversed(nodes)), tuple(reversed(labels))

    for f in order:
        if not is_final(f):
            continue
        cycle = _find_cycle(f, successors)
        if cycle is not None:
            loop_nodes, loop_labels = cycle
            stem_nodes, stem_labels = path_to(f)
            return Lasso(stem_nodes, stem_labels, loop_nodes, loop_labels)
    return None


def _find_cycle(f, successors):
    """Non-empty path f -> ... -> f, as (nodes_after_each_edge, labels)."""
    cparent = {}
    cqueue = []
    cseen = set()

    def rebuild(last, lab):
        nodes, labels = [f], [lab]
        k = last
        while k != f:
            k2, l2 = cparent[k]
            nodes.append(k)
            labels.append(l2)
            k = k2
        nodes.reverse()
        labels.reverse()
        return tuple(nodes), tuple(labels)

    for (lab, m) in successors(f):
        if m == f:
            return (f,), (lab,)
        if m not in cseen:
            cseen.add(m)
            cparent[m] = (f, lab)
            cqueue.append(m)
    while cqueue:
        n = cqueue.pop(0)
        for (lab, m) in successors(n):
            if m == f:
                return rebuild(n, lab)
            if m not in cseen:
                cseen.add(m)
                cparent[m] = (n, lab)
                cqueue.append(m)
    return None


# ---------------------------------------------------------------------------
# Membership, emptiness, trimming


def _position_graph(x: UPWord):
    """Successor on canonical positions of x (see UPWord.position_after)."""
    p, q = len(x.prefix), len(x.period)

    def nxt(i):
        return i + 1 if i + 1 < p + q else p

    def sym(i):
        return x[i]

    return nxt, sym, p + q


def member_up(b: BuchiAutomaton, x: UPWord,
              from_states: Optional[Iterable[State]] = None) -> bool:
    """Does b accept the UP word x (from from_states, default initial)?"""
    nxt, sym, _ = _position_graph(x)
    starts = b.initial if from_states is None else frozenset(from_states)

    def succ(node):
        q, i = node
        return [(sym(i), (r, nxt(i))) for r in b.successors(q, sym(i))]

    # A final product node on a cycle must repeat with the same position,
    # which only happens at period positions; find_lasso handles this.
    lasso = find_lasso([(q, 0) for q in starts], succ,
                       lambda n: n[0] in b.final)
    return lasso is not None


def is_empty(b: BuchiAutomaton) -> bool:
    return accepts_some(b) is None


def accepts_some(b: BuchiAutomaton) -> Optional[Lasso]:
    """An accepting lasso of b, or None when L(b) is empty."""

    def succ(q):
        return [(a, r) for (p, a, r) in b.transitions if p == q]

    return find_lasso(b.initial, succ, lambda q: q in b.final)


def lasso_word(lasso: Lasso) -> UPWord:
    """The UP word read along a lasso whose labels are symbols."""
    from .words import up_word
    return up_word(lasso.stem_labels, lasso.loop_labels)


def trim(b: BuchiAutomaton) -> BuchiAutomaton:
    """Restrict to states reachable from initial and co-reachable from a
    final state that lies on a cycle (i.e. useful for acceptance)."""
    fwd = {q: set() for q in b.states}
    bwd = {q: set() for q in b.states}
    for (q, a, r) in b.transitions:
        fwd[q].add(r)
        bwd[r].add(q)

    def reach(starts, edges):
        seen = set(starts)
        stack = list(starts)
        while stack:
            n = stack.pop()
            for m in edges[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return seen

    reachable = reach(b.initial, fwd)
    # Final states on a non-trivial cycle.
    live_finals = set()
    for f in b.final:
        succs = reach(fwd[f], fwd) | set(fwd[f])
        if f in succs:
            live_finals.add(f)
    keep = reachable & (reach(live_finals, bwd) | live_finals)
    return BuchiAutomaton(
        b.alphabet, frozenset(keep),
        frozenset(t for t in b.transitions if t[0] in keep and t[2] in keep),
        b.initial & keep, b.final & keep)


def product(b1: BuchiAutomaton, b2: BuchiAutomaton) -> BuchiAutomaton:
    """Intersection via the usual two-phase flag construction."""
    states = set()
    trans = set()
    initial = {(q1, q2, 0) for q1 in b1.initial for q2 in b2.initial}
    stack = list(initial)
    states |= initial
    while stack:
        (q1, q2, ph) = stack.pop()
        # Phase flips on leaving a final state of the watched component,
        # so "phase 0 with q1 final" recurs only if both finals recur.
        if ph == 0:
            nph = 1 if q1 in b1.final else 0
        else:
            nph = 0 if q2 in b2.final else 1
        for a in b1.alphabet & b2.alphabet:
            for r1 in b1.successors(q1, a):
                for r2 in b2.successors(q2, a):
                    node = (r1, r2, nph)
                    trans.add(((q1, q2, ph), a, node))
                    if node not in states:
                        states.add(node)
                        stack.append(node)
    final = frozenset(s for s in states if s[2] == 0 and s[0] in b1.final)
    return BuchiAutomaton(b1.alphabet & b2.alphabet, frozenset(states),
                          frozenset(trans), frozenset(initial), final)


# ---------------------------------------------------------------------------
# Prefixes and topological closure


@dataclass(frozen=True)
class NFA:
    """Finite-word automaton used for prefix languages."""
    alphabet: FrozenSet
    states: FrozenSet[State]
    transitions: FrozenSet[Tuple[State, object, State]]
    initial: FrozenSet[State]
    final: FrozenSet[State]

    def accepts(self, w) -> bool:
        cur = set(self.initial)
        for a in w:
            cur = {r for (q, b, r) in self.transitions
                   if q in cur and b == a}
            if not cur:
                return False
        return bool(cur & self.final)


def pref_automaton(b: BuchiAutomaton) -> NFA:
    """NFA for the finite prefixes of words in L(b)."""
    t = trim(b)
    return NFA(t.alphabet, t.states, t.transitions, t.initial, t.states)


def closure(b: BuchiAutomaton) -> BuchiAutomaton:
    """Buchi automaton for the topological closure of L(b).

    x is in the closure iff every finite prefix of x extends to a word
    of L(b), i.e. iff x has an infinite run in the trimmed automaton.
    The subset construction makes that a deterministic safety condition.
    """
    t = trim(b)
    init = frozenset(t.initial)
    if not init:
        # Empty language: closure is empty too.
        return BuchiAutomaton(b.alphabet, frozenset(), frozenset(),
                              frozenset(), frozenset())
    states = {init}
    trans = set()
    stack = [init]
    while stack:
        s = stack.pop()
        for a in t.alphabet:
            nxt = frozenset(r for q in s for r in t.successors(q, a))
            if not nxt:
                continue
            trans.add((s, a, nxt))
            if nxt not in states:
                states.add(nxt)
                stack.append(nxt)
    return BuchiAutomaton(b.alphabet, frozenset(states), frozenset(trans),
                          frozenset([init]), frozenset(states))


# ---------------------------------------------------------------------------
# Prophetic look-ahead validation


@dataclass(frozen=True)
class PropheticReport:
    """Outcome of validating a look-ahead automaton.

    Codeterminism (no word has two distinct accepting runs) is decided
    exactly.  Cocompleteness (every word has an accepting run from some
    state) is only sampled on UP words up to sample_bound, so a passing
    report is evidence, not proof, on that side.
    """
    codeterministic: bool
    ambiguous_word: Optional[UPWord]
    sample_bound: int
    uncovered_word: Optional[UPWord]

    @property
    def ok(self) -> bool:
        return self.codeterministic and self.uncovered_word is None


def _ambiguous_word(b: BuchiAutomaton) -> Optional[UPWord]:
    """A UP word with two distinct accepting runs, if one exists.

    Self-product over state pairs with an absorbing difference flag and
    a phase bit enforcing that both runs accept.  Runs may start at any
    state: look-ahead automata run from every state simultaneously.
    """

    def succ(node):
        q1, q2, diff, ph = node
        nph = (1 if q1 in b.final else 0) if ph == 0 else \
              (0 if q2 in b.final else 1)
        out = []
        for (p, a, r1) in b.transitions:
            if p != q1:
                continue
            for r2 in b.successors(q2, a):
                out.append((a, (r1, r2, diff or r1 != r2, nph)))
        return out

    init = [(q1, q2, q1 != q2, 0) for q1 in b.states for q2 in b.states]
    lasso = find_lasso(
        init, succ,
        lambda n: n[2] and n[3] == 0 and n[0] in b.final)
    if lasso is None:
        return None
    return lasso_word(lasso)


def all_up_words(alphabet, max_prefix: int, max_period: int):
    """All canonical UP words over alphabet within the length bounds."""
    from itertools import product as iproduct
    syms = sorted(alphabet, key=repr)
    seen = set()
    for lp in range(max_prefix + 1):
        for lq in range(1, max_period + 1):
            for u in iproduct(syms, repeat=lp):
                for v in iproduct(syms, repeat=lq):
                    from .words import up_word
                    x = up_word(u, v)
                    if (x.prefix, x.period) not in seen:
                        seen.add((x.prefix, x.period))
                        yield x


def prophetic_check(b: BuchiAutomaton, sample_bound: int = 3,
                    words: Optional[Iterable[UPWord]] = None) -> PropheticReport:
    """Validate that b can serve as a prophetic look-ahead.

    words restricts the cocompleteness sample; by default every UP word
    over the full alphabet within sample_bound is tried, but a look-ahead
    that only ever reads suffixes of endmarked inputs should be sampled
    on those.
    """
    ambiguous = _ambiguous_word(b)
    uncovered = None
    if words is None:
        words = all_up_words(b.alphabet, sample_bound, sample_bound)
    for x in words:
        if not any(member_up(b, x, from_states=[q]) for q in b.states):
            uncovered = x
            break
    return PropheticReport(ambiguous is None, ambiguous,
                           sample_bound, uncovered)
