"""Brute-force reference semantics for the continuity checkers.

A synchronized bad pair is two families of domain words
u v^n w z^omega and u v^n w' z'^omega whose inputs converge (they share
the prefix u v^n) while the images keep a mismatch at a fixed position
or one family's images fail to converge at all.  Finding one disproves
continuity at u v^omega (when that limit is in the domain) or uniform
continuity (unconditionally).  The search is bounded and only its
positive answers are definite.

Also provides a reproducible generator of small functional one-way
transducers used by the differential tests.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Tuple, Union

from .oneway import (EpsilonLoopOutput, Transducer, eval_up,
                     functionality_check, transducer, trim_transducer)
from .twoway import Output, eval_up_2way
from .words import UPWord, Word, up_lcp, up_word


@dataclass(frozen=True)
class Divergent:
    side: str  # "left" or "right"


@dataclass(frozen=True)
class MismatchAt:
    position: int


@dataclass(frozen=True)
class BadPair:
    u: Word
    v: Word
    w: Word
    wp: Word
    z: UPWord  # the periodic tails, as omega-words
    zp: UPWord
    evidence: Union[Divergent, MismatchAt]


@dataclass(frozen=True)
class BadPairFound:
    pair: BadPair


@dataclass(frozen=True)
class NoneUpTo:
    bound: int


def _evaluator(machine):
    if isinstance(machine, Transducer):
        def ev1(x):
            try:
                return eval_up(machine, x)
            except EpsilonLoopOutput:
                # accepted but with a finite image: not a function value
                return None
        return ev1

    def ev(x):
        got = eval_up_2way(machine, x)
        return got.value if isinstance(got, Output) else None

    return ev


def _words_up_to(letters, lo, hi):
    for k in range(lo, hi + 1):
        for w in itertools.product(letters, repeat=k):
            yield w


def _stable_up_to(imgs, window: int) -> int:
    """Positions where the family's images can be trusted: below the
    least pairwise lcp among the last three samples.  (Pairwise, since
    a family can cycle with period two in n, making consecutive images
    equal while the family keeps changing.)"""
    stable = window
    for x, y in itertools.combinations(imgs[-3:], 2):
        l = up_lcp(x, y)
        if l is not None:
            stable = min(stable, l)
    return stable


def _diverges(lcps) -> bool:
    # images must keep stalling: consecutive lcps finite, never growing,
    # and falling behind the index
    if any(l is None for l in lcps):
        return False
    return all(l < n + 1 for n, l in enumerate(lcps)) and \
        all(b <= a for a, b in zip(lcps, lcps[1:]))


def brute_force_check(machine, variant: str, bound: int):
    """Search for a synchronized bad pair with all parts of length at
    most bound; BadPairFound(pair) or NoneUpTo(bound).

    Images are sampled at n = 1..2*bound+2 and compared on a fixed
    window, so only positive answers are conclusive.
    """
    if variant not in ("cont", "ucont"):
        raise ValueError(f"unknown variant {variant!r}")
    ev = _evaluator(machine)
    letters = sorted(machine.alphabet)
    n_max = 2 * bound + 2
    window = 4 * (bound + 2)
    cache = {}

    def image(prefix, period):
        x = up_word(prefix, period)
        if x not in cache:
            cache[x] = ev(x)
        return cache[x]

    for u in _words_up_to(letters, 0, bound):
        for v in _words_up_to(letters, 1, bound):
            if variant == "cont" and image(u, v) is None:
                continue
            tails = []
            for w in _words_up_to(letters, 0, bound):
                for z in _words_up_to(letters, 1, bound):
                    imgs = [image(u + v * n + w, z)
                            for n in range(1, n_max + 1)]
                    if any(i is None for i in imgs):
                        continue
                    takes = [i.take(window) for i in imgs]
                    lcps = [up_lcp(a, b) for a, b in zip(imgs, imgs[1:])]
                    # positions that have not stabilized across the last
                    # samples may mismatch as an artifact of the finite
                    # n range
                    tails.append((w, z, takes, _stable_up_to(imgs, window)))
                    if _diverges(lcps):
                        pair = BadPair(u, v, w, w, up_word((), z),
                                       up_word((), z), Divergent("left"))
                        return BadPairFound(pair)
            for (w, z, ta, sa), (wp, zp, tb, sb) in \
                    itertools.combinations(tails, 2):
                common = set(range(min(sa, sb)))
                for a, b in zip(ta, tb):
                    common &= {i for i in common if a[i] != b[i]}
                    if not common:
                        break
                if common:
                    pair = BadPair(u, v, w, wp, up_word((), z),
                                   up_word((), zp), MismatchAt(min(common)))
                    return BadPairFound(pair)
    return NoneUpTo(bound)


def recheck_bad_pair(machine, pair: BadPair, n_max: int = 8) -> bool:
    """Re-validate a reported pair by direct evaluation."""
    ev = _evaluator(machine)
    left, right = [], []
    for n in range(1, n_max + 1):
        a = ev(up_word(pair.u + pair.v * n + pair.w, pair.z.period))
        b = ev(up_word(pair.u + pair.v * n + pair.wp, pair.zp.period))
        if a is None or b is None:
            return False
        left.append(a)
        right.append(b)
        if isinstance(pair.evidence, MismatchAt):
            i = pair.evidence.position
            if a[i] == b[i]:
                return False
    if isinstance(pair.evidence, MismatchAt):
        # the position must have stabilized in both families
        i = pair.evidence.position
        for fam in (left, right):
            if i >= _stable_up_to(fam, i + 1):
                return False
    else:
        lcps = [up_lcp(x, y) for x, y in zip(left, left[1:])]
        if not _diverges(lcps):
            return False
    return True


DEFAULT_PROFILE = (4, 2, 2, 2)  # states, input letters, output letters, max output


def _build_free(rng, n_states, letters, out_letters, max_out):
    # one tangled graph with occasional competing branches
    states = [f"q{i}" for i in range(n_states)]
    trans = set()
    for q in states:
        for a in letters:
            if rng.random() < 0.25:
                continue
            branches = 2 if rng.random() < 0.45 else 1
            for _ in range(branches):
                out = "".join(rng.choice(out_letters)
                              for _ in range(rng.randrange(max_out + 1)))
                trans.add((q, a, rng.choice(states), out))
    initial = rng.sample(states, rng.randrange(1, 3))
    final = rng.sample(states, rng.randrange(1, 3))
    return states, trans, initial, final


def _build_halves(rng, n_states, letters, out_letters, max_out):
    # union of two deterministic-ish halves guessing from the start;
    # this shape breeds the limit-vs-approximation conflicts that make
    # a functional machine discontinuous
    trans, states, initial, final = set(), [], [], []
    per = max(1, n_states // 2)
    for h in range(2):
        hs = [f"q{h}{i}" for i in range(per)]
        states += hs
        initial.append(hs[0])
        final.append(rng.choice(hs))
        for q in hs:
            for a in letters:
                if rng.random() < 0.3:
                    continue
                out = "".join(rng.choice(out_letters)
                              for _ in range(rng.randrange(max_out + 1)))
                trans.add((q, a, rng.choice(hs), out))
    return states, trans, initial, final


def _silent_accepting_cycle(t: Transducer) -> bool:
    """Trimmed machine has a cycle through a final state that emits
    nothing, i.e. an accepted word with a finite image."""
    eps = {}
    for (q, a, r, g) in t.transitions:
        if not g:
            eps.setdefault(q, set()).add(r)
    for f in t.final:
        stack, seen = [f], set()
        while stack:
            q = stack.pop()
            for r in eps.get(q, ()):
                if r == f:
                    return True
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
    return False


def random_instance(seed: int, profile: Tuple[int, int, int, int]
                    = DEFAULT_PROFILE) -> Transducer:
    """Reproducible small functional transducer, redrawn until the
    functionality check passes.

    Machines with silent accepting cycles are redrawn too, so every
    accepted word of the result has an infinite image and language
    level continuity coincides with continuity of the function."""
    n_states, n_in, n_out, max_out = profile
    letters = "abcdefgh"[:n_in]
    out_letters = "abcdefgh"[:n_out]
    rng = random.Random(seed)
    while True:
        build = _build_halves if rng.random() < 0.5 else _build_free
        s, tr, i, f = build(rng, n_states, letters, out_letters, max_out)
        t = trim_transducer(transducer(letters, out_letters, s, tr, i, f))
        if not t.states or not t.transitions:
            continue
        if _silent_accepting_cycle(t):
            continue
        # strict pending bound keeps the paired-run search small; it
        # only costs us some functional candidates, which are redrawn
        if functionality_check(t, bound=8) is None:
            return t
