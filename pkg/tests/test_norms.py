import random

import pytest

from fairdg.norms import (
    BAD,
    BIT_CONTEXTS,
    FAIR,
    GOOD,
    UNFAIR,
    Action,
    NormPattern,
    Reputation,
    SocialNorm,
    all_norms,
    bit_index,
)


def test_reputation_action_parse_round_trip():
    for rep in (GOOD, BAD):
        assert Reputation.parse(str(rep)) is rep
        assert Reputation.parse(rep.word) is rep
        assert Reputation.parse(rep.word.lower()) is rep
    for act in (FAIR, UNFAIR):
        assert Action.parse(str(act)) is act
        assert Action.parse(act.word) is act
    with pytest.raises(ValueError):
        Reputation.parse("X")
    with pytest.raises(ValueError):
        Action.parse("fairish")


def test_bit_context_order():
    assert BIT_CONTEXTS == (
        (GOOD, FAIR, GOOD),
        (GOOD, UNFAIR, GOOD),
        (BAD, FAIR, GOOD),
        (BAD, UNFAIR, GOOD),
        (GOOD, FAIR, BAD),
        (GOOD, UNFAIR, BAD),
        (BAD, FAIR, BAD),
        (BAD, UNFAIR, BAD),
    )
    for k, ctx in enumerate(BIT_CONTEXTS):
        assert bit_index(*ctx) == k


def test_label_examples():
    assert SocialNorm((1,) * 8).label == 255
    assert SocialNorm((0,) * 8).label == 0
    # 1,0,1,0,0,1,0,1 -> 128 + 32 + 4 + 1
    assert SocialNorm.parse("[1,0,1,0;0,1,0,1]").label == 165


def test_label_round_trip():
    for k in range(256):
        n = SocialNorm.from_label(k)
        assert n.label == k
        assert SocialNorm.parse(n.text()) == n
        assert SocialNorm.parse(str(k)) == n


def test_parse_variants():
    n = SocialNorm.from_label(165)
    assert SocialNorm.parse("1010;0101") == n
    assert SocialNorm.parse("10100101") == n
    assert SocialNorm.parse(" [1,0,1,0;0,1,0,1] ") == n
    assert n.text() == "[1,0,1,0;0,1,0,1]"


@pytest.mark.parametrize("bad", ["256", "-1", "[1,0;1]", "1012;0101", "abc", "101001011"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        SocialNorm.parse(bad)


def test_assess_extremes():
    always_good = SocialNorm.from_label(255)
    always_bad = SocialNorm.from_label(0)
    for x, a, y in BIT_CONTEXTS:
        assert always_good.assess(x, a, y) is GOOD
        assert always_bad.assess(x, a, y) is BAD


def test_assess_165():
    n = SocialNorm.from_label(165)
    assert n.assess(GOOD, FAIR, GOOD) is GOOD
    assert n.assess(GOOD, UNFAIR, GOOD) is BAD
    assert n.assess(BAD, FAIR, GOOD) is GOOD
    assert n.assess(BAD, UNFAIR, GOOD) is BAD
    assert n.assess(GOOD, FAIR, BAD) is BAD
    assert n.assess(GOOD, UNFAIR, BAD) is GOOD
    assert n.assess(BAD, FAIR, BAD) is BAD
    assert n.assess(BAD, UNFAIR, BAD) is GOOD


def test_assess_justified_unfairness():
    # [1,0,0,0;0,1,0,1]: unfair toward a bad recipient keeps a good reputation
    n = SocialNorm.parse("[1,0,0,0;0,1,0,1]")
    assert n.assess(GOOD, UNFAIR, BAD) is GOOD
    assert n.assess(GOOD, FAIR, BAD) is BAD


def test_all_norms():
    norms = all_norms()
    assert len(norms) == 256
    assert [n.label for n in norms] == list(range(256))


def test_pattern_full_wildcard():
    assert len(NormPattern.parse("[*,*,*,*;*,*,*,*]").match()) == 256


def test_pattern_sixteen():
    got = [n.label for n in NormPattern.parse("[1,0,*,*;*,1,*,1]").match()]
    assert got == [133, 135, 141, 143, 149, 151, 157, 159,
                   165, 167, 173, 175, 181, 183, 189, 191]


def test_pattern_small_sets():
    # fixed bits b6=1 b4=0 b3=0 b2=1 b1=0 b0=1 -> 69 + 128*b7 + 32*b5
    got = [n.label for n in NormPattern.parse("[*,1,*,0;0,1,0,1]").match()]
    assert got == [69, 101, 197, 229]
    # fixed bits b7=1 b6=0 b3=0 b2=1 b1=0 b0=1 -> 133 + 32*b5 + 16*b4
    got = [n.label for n in NormPattern.parse("[1,0,*,*;0,1,0,1]").match()]
    assert got == [133, 149, 165, 181]


def test_pattern_cardinality_and_bruteforce():
    rng = random.Random(7)
    for _ in range(25):
        entries = tuple(rng.choice([0, 1, None]) for _ in range(8))
        pat = NormPattern(entries)
        brute = [
            n
            for n in all_norms()
            if all(e is None or e == b for e, b in zip(entries, n.bits))
        ]
        assert list(pat.match()) == brute
        assert len(brute) == 2 ** pat.n_wildcards
        assert NormPattern.parse(pat.text()) == pat


def test_pattern_rejects():
    for bad in ["[1,0,*;*]", "1*", "10**01**9"]:
        with pytest.raises(ValueError):
            NormPattern.parse(bad)
