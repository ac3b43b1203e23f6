from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from fpsdual.monoid import (
    EMPTY,
    IndexSpace,
    IndexSpaceError,
    Word,
    concat,
    factorizations,
    length,
)

AB = IndexSpace.free("ab")
words_ab = st.lists(st.sampled_from("ab"), max_size=6).map(Word)


def brute_factorizations(w, k):
    """All k-tuples of substrings drawn from every word up to |w| whose
    concatenation is w."""
    pool = ["".join(t) for n in range(len(w) + 1) for t in product(sorted(set(w)) or [""], repeat=n)]
    pool = sorted(set(pool))
    return {t for t in product(pool, repeat=k) if "".join(t) == w}


def test_concat_examples():
    assert concat(Word("ab"), Word("a")) == Word("aba")
    assert concat(EMPTY, Word("ab")) == Word("ab")
    assert concat(Word("a"), EMPTY) == Word("a")
    with pytest.raises(IndexSpaceError):
        AB.concat(Word("a"), Word("c"))


def test_length_examples():
    assert length(EMPTY) == 0
    assert length(Word("aba")) == 3


@given(words_ab, words_ab, words_ab)
def test_free_monoid_axioms(u, v, w):
    assert concat(concat(u, v), w) == concat(u, concat(v, w))
    assert concat(EMPTY, u) == u == concat(u, EMPTY)
    assert length(concat(u, v)) == length(u) + length(v)


def test_factorization_examples():
    got = {tuple(map(str, t)) for t in factorizations(Word("ab"), 2)}
    assert got == {("", "ab"), ("a", "b"), ("ab", "")}
    assert got == brute_factorizations("ab", 2)
    assert factorizations(Word("aba"), 1) == [(Word("aba"),)]
    assert factorizations(EMPTY, 2) == [(EMPTY, EMPTY)]
    assert factorizations(EMPTY, 0) == [()]
    assert factorizations(Word("a"), 0) == []


def test_factorizations_exhaustive():
    for n in range(7):
        for letters in product("ab", repeat=n):
            w = Word(letters)
            for k in range(1, 5):
                fs = factorizations(w, k)
                assert len(fs) == comb(n + k - 1, k - 1)
                assert len(set(fs)) == len(fs)
                assert all(concat_all(t) == w for t in fs)
            assert len(factorizations(w, 2)) == n + 1


def test_factorizations_match_brute_force():
    for w in ["", "a", "ab", "aab", "abba"]:
        for k in range(1, 4):
            got = {tuple(map(str, t)) for t in factorizations(Word(w), k)}
            assert got == brute_factorizations(w, k)


def concat_all(t):
    out = EMPTY
    for u in t:
        out = concat(out, u)
    return out


def test_enumerate_examples():
    assert IndexSpace.naturals().enumerate(3) == [0, 1, 2]
    assert [str(w) for w in AB.enumerate(4)] == ["", "a", "b", "aa"]
    assert AB.enumerate(0) == []


def test_enumerate_is_length_lex_and_prefix_stable():
    oracle = sorted(
        ("".join(t) for n in range(5) for t in product("ab", repeat=n)),
        key=lambda s: (len(s), s),
    )
    got = [str(w) for w in AB.enumerate(len(oracle))]
    assert got == oracle
    for n in range(40):
        assert AB.enumerate(n) == AB.enumerate(n + 1)[:n]
    ba = IndexSpace.free("ba")
    assert [str(w) for w in ba.enumerate(4)] == ["", "b", "a", "bb"]


def test_position_inverts_enumeration():
    for i, w in enumerate(AB.enumerate(100)):
        assert AB.position(w) == i
    sp = IndexSpace.free(["x0", "x1", "x2"])
    for i, w in enumerate(sp.enumerate(50)):
        assert sp.position(w) == i


def test_empty_alphabet():
    sp = IndexSpace.free([])
    assert sp.enumerate(5) == [EMPTY]
    assert sp.contains(EMPTY)
    assert not sp.contains(Word("a"))


def test_space_validation():
    with pytest.raises(ValueError):
        IndexSpace.free(["a", "a"])
    with pytest.raises(ValueError):
        IndexSpace.free(["a", ""])
    assert not IndexSpace.naturals().contains(-1)
    assert not IndexSpace.naturals().contains(True)


def test_literals():
    assert AB.parse_index("") == EMPTY
    assert AB.parse_index("aba") == Word("aba")
    sp = IndexSpace.free(["x0", "x1", "x10"])
    assert sp.parse_index("x10x1") == Word(["x10", "x1"])
    assert sp.format_index(Word(["x10", "x1"])) == "x10x1"
    with pytest.raises(IndexSpaceError):
        AB.parse_index("abc")
    assert IndexSpace.naturals().parse_index("12") == 12
    assert IndexSpace.from_description(AB.describe()) == AB
    assert IndexSpace.from_description("naturals") == IndexSpace.naturals()
