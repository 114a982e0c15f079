from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hecke4.circle import (
    ROOTS,
    CirclePointQ,
    HeightedRational,
    berggren_children,
    circle_lagrange_estimate,
    even_cf,
    even_cf_value,
    lagrange_estimate,
    mod_proj,
    pythagoras_tree,
    romik_orbit,
    romik_step,
    stereo,
    stereo_triple,
)
from hecke4.qfield import INF, SQRT2, compare, sqrt, to_interval
from hecke4.romik import EvPeriodicWord, eval_word, expand
from hecke4.spectra import markoff_periodic


def _all_triples(cmax):
    out = set()
    for c in range(1, cmax + 1):
        for a in range(0, c + 1):
            b = math.isqrt(c * c - a * a)
            if b * b == c * c - a * a and math.gcd(a, b, c) == 1:
                out.add(CirclePointQ(a, b, c))
    return out


def test_romik_step_examples():
    assert romik_step((3, 4, 5)) == (CirclePointQ(1, 0, 1), 3)
    assert romik_step((4, 3, 5)) == (CirclePointQ(0, 1, 1), 1)
    assert romik_step((1, 0, 1)) == (CirclePointQ(1, 0, 1), 1)
    assert romik_step((0, 1, 1)) == (CirclePointQ(0, 1, 1), 3)
    assert romik_step((20, 21, 29)) == (CirclePointQ(4, 3, 5), 2)


def test_romik_step_rejects_other_quadrants():
    with pytest.raises(ValueError):
        romik_step((-3, 4, 5))
    with pytest.raises(ValueError):
        CirclePointQ(3, 4, 6)
    with pytest.raises(ValueError):
        CirclePointQ(6, 8, 10)


def test_children_of_345():
    kids = berggren_children((3, 4, 5))
    assert set(kids) == {CirclePointQ(5, 12, 13), CirclePointQ(21, 20, 29), CirclePointQ(15, 8, 17)}
    grand = [g for k in kids for g in berggren_children(k)]
    assert len(set(grand)) == 9


@pytest.mark.parametrize("t", sorted(pythagoras_tree(120)), ids=str)
def test_children_map_back(t):
    for d, child in zip((1, 2, 3), berggren_children(t)):
        assert romik_step(child) == (t, d)


def test_tree_complete_up_to_200():
    tree = pythagoras_tree(200)
    assert len(tree) == len(set(tree))
    assert set(tree) == {t for t in _all_triples(200) if t.a > 0 and t.b > 0}
    assert set(ROOTS) <= set(tree)


def test_tree_parallel_matches():
    assert pythagoras_tree(300, jobs=2) == pythagoras_tree(300)


def test_orbits_terminate():
    for t in _all_triples(200):
        last, _ = romik_orbit(t)[-1]
        assert last.as_tuple() in ((1, 0, 1), (0, 1, 1))


def test_stereo():
    assert stereo(1) == CirclePointQ(1, 0, 1)
    assert stereo(INF) == CirclePointQ(0, 1, 1)
    assert stereo_triple(2, 1) == CirclePointQ(4, 3, 5)
    assert stereo_triple(3, 1) == CirclePointQ(3, 4, 5)  # p + q even: halved
    for p, q in ((3, 2), (5, 2), (7, 4)):
        assert stereo_triple(p, q) == CirclePointQ(2 * p * q, p * p - q * q, p * p + q * q)
    a, b = stereo(SQRT2 + 1)
    assert a * a + b * b == 1


def test_mod_proj():
    assert mod_proj((Fraction(3, 5), Fraction(4, 5))) == SQRT2
    assert mod_proj(CirclePointQ(3, 4, 5)) == SQRT2
    assert mod_proj(CirclePointQ(1, 0, 1)) == 0
    assert mod_proj(CirclePointQ(0, 1, 1)) is INF
    assert mod_proj((SQRT2 / 2, SQRT2 / 2)) == 1
    assert mod_proj((Fraction(1, 2), sqrt(3) / 2)) == eval_word("(31)")


@given(st.fractions(min_value=-20, max_value=20, max_denominator=50))
def test_mod_proj_inverts_stereo(t):
    if t == 1:
        return
    pt = stereo(t)
    assert mod_proj(pt) == (t - 1) * SQRT2 / 2


def test_digits_agree_with_projected_expansion():
    for t in _all_triples(200):
        x = Fraction(t.a, t.c)
        if x in (Fraction(4, 5), Fraction(3, 5)) or t.b in (0, t.c) or t.a == 0:
            continue
        _, d = romik_step(t)
        assert expand(mod_proj(t), 1)[0] == (d,)


def test_height():
    assert HeightedRational(3, 1).height == Fraction(1, 2)
    assert HeightedRational(2, 3).height == 9
    with pytest.raises(ValueError):
        HeightedRational(2, 4)


def test_lagrange_estimate_basics():
    assert lagrange_estimate(Fraction(3, 7), 100).unbounded
    est = lagrange_estimate(SQRT2 - 1, 1)
    assert est.value > 0 and est.window == (1, 1)
    assert circle_lagrange_estimate(CirclePointQ(3, 4, 5), 100).unbounded


@pytest.mark.parametrize("word", ["(2)", "(31)", "(32)"])
def test_lagrange_estimate_matches_markoff(word):
    t = SQRT2 * eval_word(word) + 1
    est = lagrange_estimate(t, 10**5)
    target = float(SQRT2 * markoff_periodic(word))
    assert abs(float(est.value) - target) < 1e-4


def test_estimates_on_both_sides_agree():
    rng = random.Random(11)
    done = 0
    while done < 20:
        cycle = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        if set(cycle) in ({1}, {3}):
            continue
        w = EvPeriodicWord([rng.randint(1, 3) for _ in range(rng.randint(0, 2))], cycle)
        t = SQRT2 * eval_word(w) + 1
        line = lagrange_estimate(t, 10**5)
        circ = circle_lagrange_estimate(stereo(t), 10**10)
        target = float(SQRT2 * markoff_periodic(w.cycle))
        assert abs(float(line.value) - 2 * float(circ.value)) < 1e-3, w
        assert abs(float(line.value) - target) < 1e-3, w
        done += 1


@pytest.mark.parametrize(
    "word, first",
    [("(2)", [(1, None), (1, 1), (1, 1)]), ("3(2)", [(2, None), (1, 1), (1, 1)]), ("(31)", [(2, None), (2, -1), (2, -1)])],
)
def test_even_cf_terms(word, first):
    assert even_cf(word, 3) == first


@pytest.mark.parametrize("word", ["(2)", "3(2)", "(31)", "(12)", "2(132)", "33(1223)", "1(2113)"])
def test_even_cf_value_matches_projection(word):
    terms = even_cf(word, 60)
    standard = to_interval(SQRT2 * eval_word(word) + 1, Fraction(1, 10**15)).mid()
    assert abs(even_cf_value(terms) - standard) < Fraction(1, 10**9)


def test_even_cf_rejects_trailing_threes():
    with pytest.raises(ValueError):
        even_cf("12(3)")
