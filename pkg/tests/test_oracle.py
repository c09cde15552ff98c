import pytest

from omegacont.fixtures import branch_switch, prefix_doubler, stem_doubler
from omegacont.oneway import decide_continuity, transducer
from omegacont.oracle import (
    BadPair, BadPairFound, Divergent, MismatchAt, NoneUpTo,
    brute_force_check, random_instance, recheck_bad_pair,
)


def parity_flipper():
    """Silent on a, then copies the parity of the a-count into the tail:
    the images of a^n b^omega flip between a^omega and b^omega."""
    return transducer("ab", "ab", "eo",
                      {("e", "a", "o", ""), ("o", "a", "e", ""),
                       ("e", "b", "e", "a"), ("o", "b", "o", "b")},
                      "e", "eo")


class TestBruteForce:
    def test_branch_switch_bad_pair(self):
        r = brute_force_check(branch_switch(), "cont", 2)
        assert isinstance(r, BadPairFound)
        p = r.pair
        assert p.evidence == MismatchAt(0)
        assert p.v  # the pumped part is nonempty
        assert recheck_bad_pair(branch_switch(), p)

    def test_prefix_doubler_none_up_to(self):
        assert brute_force_check(prefix_doubler(), "cont", 3) == NoneUpTo(3)

    def test_prefix_doubler_ucont_small_bound(self):
        assert brute_force_check(prefix_doubler(), "ucont", 2) == NoneUpTo(2)

    def test_stem_doubler_bad_pair(self):
        r = brute_force_check(stem_doubler(), "cont", 3)
        assert isinstance(r, BadPairFound)
        assert isinstance(r.pair.evidence, MismatchAt)
        assert recheck_bad_pair(stem_doubler(), r.pair, n_max=8)

    def test_divergent_family(self):
        r = brute_force_check(parity_flipper(), "ucont", 1)
        assert isinstance(r, BadPairFound)
        assert isinstance(r.pair.evidence, Divergent)
        assert recheck_bad_pair(parity_flipper(), r.pair)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            brute_force_check(branch_switch(), "weird", 1)

    def test_sampling_artifact_rejected(self):
        # deterministic, hence continuous, but the images of
        # b^n (ba)^omega repeat in n with period two; naive sampling
        # reports a phantom mismatch deep in the tail
        t = transducer("ab", "ab", ["p", "q"],
                       {("q", "a", "p", "aa"), ("q", "b", "p", "b"),
                        ("p", "b", "q", "ab"), ("p", "a", "p", "")},
                       ["p"], ["q"])
        assert decide_continuity(t, "cont") is None
        assert brute_force_check(t, "cont", 2) == NoneUpTo(2)

    def test_recheck_rejects_corrupted_evidence(self):
        r = brute_force_check(branch_switch(), "cont", 2)
        p = r.pair
        # identical tails can never mismatch
        twinned = BadPair(p.u, p.v, p.w, p.w, p.z, p.z, p.evidence)
        assert not recheck_bad_pair(branch_switch(), twinned)


class TestRandomInstance:
    def test_reproducible(self):
        assert random_instance(17) == random_instance(17)
        assert random_instance(3) != random_instance(4)

    def test_verdict_diversity(self):
        verdicts = [decide_continuity(random_instance(s), "cont") is None
                    for s in range(200)]
        assert sum(verdicts) >= 5
        assert sum(not v for v in verdicts) >= 5

    def test_profile_respected(self):
        t = random_instance(5, profile=(3, 2, 2, 1))
        assert len(t.states) <= 3
        assert t.alphabet <= {"a", "b"}
        assert all(len(g) <= 1 for (_, _, _, g) in t.transitions)


class TestDifferential:
    def test_no_contradictions_small_corpus(self):
        ms = [random_instance(s) for s in range(60)]
        for variant in ("cont", "ucont"):
            for t in ms:
                exact = decide_continuity(t, variant)
                r = brute_force_check(t, variant, 2)
                if isinstance(r, BadPairFound):
                    assert exact is not None, (variant, t)
                    assert recheck_bad_pair(t, r.pair), (variant, t)

    def test_bad_pair_found_for_discontinuous(self):
        ms = [random_instance(s) for s in range(60)]
        for variant in ("cont", "ucont"):
            for t in ms:
                if decide_continuity(t, variant) is None:
                    continue
                assert any(
                    isinstance(brute_force_check(t, variant, b),
                               BadPairFound)
                    for b in (1, 2, 3, 4)), (variant, t)
