from itertools import product

import pytest

from obcalc.presentation import GroupPresentation
from obcalc.rewrite import (
    NotConfluentError,
    RewriteSystem,
    count_normal_forms,
    format_rules,
    knuth_bendix,
    normal_form,
    prove_trivial,
)
from obcalc.words import Word, exponent_sums

ZXZ2 = GroupPresentation.make("ab", ["abAB", "bb"])


def reduced_words(letters, max_len):
    layer = [""]
    for _ in range(max_len + 1):
        yield from layer
        layer = [s + c for s in layer for c in letters if not (s and s[-1].swapcase() == c)]


def zxz2_element(w):
    e = exponent_sums(Word(w), "ab")
    return e["a"], e["b"] % 2


def sphere_sizes(max_len):
    seen = {(0, 0)}
    frontier = {(0, 0)}
    sizes = [1]
    for _ in range(max_len):
        nxt = {(x + dx, (y + dy) % 2) for x, y in frontier for dx, dy in ((1, 0), (-1, 0), (0, 1))} - seen
        seen |= nxt
        frontier = nxt
        sizes.append(len(nxt))
    return sizes


def test_zxz2_completes():
    kb = knuth_bendix(ZXZ2)
    assert kb.confluent and kb.status == "confluent"
    assert len(kb.rules) == 6
    assert normal_form(kb, "bab") == "a"
    assert prove_trivial(kb, "baBA") and prove_trivial(kb, "BB")
    assert not prove_trivial(kb, "abab")


def test_zxz2_counts_match_ball_enumeration():
    kb = knuth_bendix(ZXZ2)
    assert count_normal_forms(kb, 8) == sphere_sizes(8) == [1, 3, 4, 4, 4, 4, 4, 4, 4]


def test_zxz2_word_problem_against_model():
    kb = knuth_bendix(ZXZ2)
    words = list(reduced_words("aAbB", 5))
    nf = {w: normal_form(kb, w) for w in words}
    for u, v in product(words[:60], words):
        assert (nf[u] == nf[v]) == (zxz2_element(u) == zxz2_element(v))


def test_free_group_counts():
    kb = knuth_bendix(GroupPresentation.make("ab", []))
    assert kb.confluent
    assert count_normal_forms(kb, 5) == [1, 4, 12, 36, 108, 324]


def test_cyclic_group():
    kb = knuth_bendix(GroupPresentation.make("a", ["aa"]))
    assert count_normal_forms(kb, 4) == [1, 1, 0, 0, 0]
    kb = knuth_bendix(GroupPresentation.make("a", ["aaaaa"]))
    assert sum(count_normal_forms(kb, 6)) == 5


def test_timeout_is_a_status():
    kb = knuth_bendix(ZXZ2, max_rules=3)
    assert kb.status == "timeout" and not kb.confluent
    with pytest.raises(NotConfluentError):
        prove_trivial(kb, "ab")
    with pytest.raises(NotConfluentError):
        count_normal_forms(kb, 3)
    with pytest.raises(ValueError):
        knuth_bendix(ZXZ2, max_rules=0)


@pytest.mark.parametrize("k", [6, 7])
def test_larger_abelian_examples(k):
    kb = knuth_bendix(GroupPresentation.make("ab", ["abAB", "a" * k + "bb"]))
    assert kb.confluent


def test_rules_must_decrease():
    with pytest.raises(ValueError):
        RewriteSystem(("a", "A"), (("a", "aa"),), True)


def test_format_rules():
    kb = knuth_bendix(GroupPresentation.make("a", ["aa"]))
    assert format_rules(kb) == "A -> a\naa -> 1\n"
