from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hecke4.qfield import INF, SQRT2, Mobius, compare, sign, sqrt
from hecke4.romik import (
    H,
    BiSection,
    EvPeriodicWord,
    digit_matrix,
    eval_word,
    expand,
    primitive_root,
    reduce_pair,
    reverse,
    to_word,
    vee,
    word_matrix,
)

from strategies import words


def test_digit_matrices():
    assert digit_matrix(1) == Mobius(1, 0, SQRT2, 1)
    assert digit_matrix(2) == Mobius(1, SQRT2, SQRT2, 1)
    assert digit_matrix(3) == Mobius(1, SQRT2, 0, 1)
    assert digit_matrix(2).det() == -1
    with pytest.raises(ValueError):
        digit_matrix(4)


def test_known_values():
    assert eval_word("(2)") == 1
    assert eval_word("3(2)") == SQRT2 + 1
    assert eval_word("(1)") == 0
    assert eval_word("(3)") is INF
    # (1/2, sqrt3/2) = [(31)] projects to (1 + sqrt3)/sqrt2
    assert eval_word("(31)") == (1 + sqrt(3)) / SQRT2


def test_parse_and_canonical_form():
    w = EvPeriodicWord.parse("12(12)")
    assert w.prefix == () and w.cycle == (1, 2)
    assert str(EvPeriodicWord.parse("3(2222)")) == "3(2)"
    assert EvPeriodicWord.parse("2(12)") == EvPeriodicWord((), (2, 1))
    with pytest.raises(ValueError):
        EvPeriodicWord.parse("3(4)")
    with pytest.raises(ValueError):
        EvPeriodicWord.parse("32")


def test_word_helpers():
    assert primitive_root((1, 2, 1, 2)) == (1, 2)
    assert reverse((1, 2, 3)) == (3, 2, 1)
    assert vee((1, 2, 3)) == (3, 2, 1)
    assert word_matrix(()) == Mobius(1, 0, 0, 1)


@given(words())
def test_romik_relations(w):
    p = eval_word(w)
    assert eval_word(w.prepend((1,))) == p / (SQRT2 * p + 1)
    assert eval_word(w.prepend((2,))) == (p + SQRT2) / (SQRT2 * p + 1)
    assert eval_word(w.prepend((3,))) == SQRT2 + p


@given(words())
def test_vee_inverts(w):
    assert eval_word(vee(w)) == eval_word(w).inverse()


@given(words())
def test_expand_recovers_digits(w):
    n = len(w.prefix) + 2 * len(w.cycle)
    digits, rest = expand(eval_word(w), n)
    assert digits == w.digits(n)
    assert rest == eval_word(w.shift(n))


@given(words())
def test_to_word_round_trip(w):
    assert to_word(eval_word(w)) == w


def test_boundary_values_prefer_smaller_digit():
    # 1/sqrt2 = [1, 3, 3, ...] = [2, 1, 1, ...]
    assert expand(SQRT2 / 2, 1)[0] == (1,)
    assert expand(SQRT2, 1)[0] == (2,)


def test_bisection_parse_and_value():
    s = BiSection.parse("(13)2|(31)")
    assert str(s) == "(13)2|(31)"
    assert s.value() == eval_word("2(31)") + eval_word("(31)")
    assert s.vee().value() == eval_word("2(13)") + eval_word("(13)")


@given(words(), words())
def test_reduce_pair_maps_endpoints(u, v):
    xi, eta = -eval_word(u), eval_word(v.prepend((3,)))
    for a, b in ((xi, eta), (eta, xi), (eval_word(u), eval_word(v)), (-eval_word(u), -eval_word(v))):
        if compare(a, b) == 0:
            continue
        sec, m = reduce_pair(a, b)
        assert m.apply(a) == -eval_word(sec.left)
        assert m.apply(b) == eval_word(sec.right)
        assert compare(sec.value(), abs(b - a)) >= 0


def test_reduce_pair_with_infinity():
    sec, m = reduce_pair(-SQRT2, INF)
    assert sec.right.cycle == (3,)
    assert m.apply(-SQRT2) == -eval_word(sec.left)
    with pytest.raises(ValueError):
        reduce_pair(SQRT2, SQRT2)
