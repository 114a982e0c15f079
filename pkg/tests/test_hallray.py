from __future__ import annotations

import random
from fractions import Fraction

import pytest

from hecke4.hallray import (
    F0,
    DissectionInterval,
    dissect,
    f_sum_range,
    gap_ratio_check,
    hall_construct,
    hall_lagrange_construct,
    interval_cond_constants,
    section_constants,
    sum_decompose,
)
from hecke4.qfield import SQRT2, compare, sqrt
from hecke4.romik import EvPeriodicWord, eval_word
from hecke4.spectra import markoff_spliced

R7 = sqrt(7)


def _intervals(depth):
    level = [F0]
    out = [F0]
    for _ in range(depth):
        level = [c for iv in level for c in iv.children()]
        out.extend(level)
    return out


def test_section_constants():
    k = section_constants()
    assert k["S"] == R7 + SQRT2
    assert k["S_vee"] == (R7 - SQRT2) / 5
    assert k["1S"] == (4 * SQRT2 - R7) / 5
    assert k["3S_vee"] == (4 * SQRT2 + R7) / 5
    assert k["2S"] == (R7 + SQRT2) / 5
    assert k["2S_vee"] == R7 - SQRT2
    assert k["12S"] == 1 / R7
    assert k["32S_vee"] == R7


def test_f0_bounds():
    lo, hi, _, _ = F0.bounds()
    assert lo == (R7 - SQRT2) / 5
    assert hi == R7 - SQRT2


def test_stem_validation():
    with pytest.raises(ValueError):
        DissectionInterval("I", (2, 1))
    with pytest.raises(ValueError):
        DissectionInterval("III", (3,))
    with pytest.raises(ValueError):
        DissectionInterval("VII", ())
    DissectionInterval("II", (1,))


@pytest.mark.parametrize("iv", _intervals(4), ids=str)
def test_children_nest_with_a_gap(iv):
    lo, hi, _, _ = iv.bounds()
    left, right, (g_lo, g_hi) = dissect(iv)
    l_lo, l_hi, _, _ = left.bounds()
    r_lo, r_hi, _, _ = right.bounds()
    assert l_lo == lo and r_hi == hi
    assert compare(l_hi, g_lo) == 0 and compare(g_hi, r_lo) == 0
    assert compare(g_lo, g_hi) < 0


@pytest.mark.parametrize("iv", _intervals(3), ids=str)
def test_gap_ratios_below_one(iv):
    r1, r2 = gap_ratio_check(iv)
    assert r1.hi < 1 and r2.hi < 1


def test_interval_cond_constants():
    got = interval_cond_constants()
    for label, v in got.items():
        assert int(float(v) * 10**4) == int(label[2:])
        assert compare(v, 1) < 0


def test_random_words_land_in_the_dissection():
    rng = random.Random(7)
    for _ in range(25):
        digits = [rng.randint(1, 2)]
        while len(digits) < 30:
            d = rng.randint(1, 3)
            if d != 2 and digits[-2:] == [d, d]:
                continue
            digits.append(d)
        v = eval_word(EvPeriodicWord(digits, (2,)))
        iv = F0
        for _ in range(5):
            lo, hi, _, _ = iv.bounds()
            assert compare(lo, v) <= 0 <= compare(hi, v)
            a, b = iv.children()
            iv = a if compare(v, a.bounds()[1]) <= 0 else b


def test_f_sum_range():
    lo, hi = f_sum_range()
    assert lo == (2 * R7 - 2 * SQRT2) / 5
    assert hi == 2 * R7 - 2 * SQRT2
    assert compare(hi - lo, SQRT2) > 0


def test_sum_decompose():
    lo, hi = f_sum_range()
    eps = Fraction(1, 10**6)
    for t in (lo, hi, (lo + hi) / 2, lo + Fraction(1, 3), SQRT2):
        dec = sum_decompose(t, eps)
        a_lo, a_hi, _, _ = dec.first.bounds()
        b_lo, b_hi, _, _ = dec.second.bounds()
        assert compare(a_lo + b_lo, t) <= 0 <= compare(a_hi + b_hi, t)
        assert compare(a_hi - a_lo + b_hi - b_lo, eps) <= 0
    with pytest.raises(ValueError):
        sum_decompose(hi + 1, eps)


@pytest.mark.parametrize("alpha", [4 * SQRT2 + Fraction(1, 10**3), 6, 7, 10, sqrt(50), Fraction(25, 3)], ids=str)
def test_hall_construct(alpha):
    eps = Fraction(1, 10**9)
    res = hall_construct(alpha, eps)
    assert compare(abs(res.markoff - alpha), eps) <= 0
    # independent re-evaluation of the returned word with a wider window
    _, again = markoff_spliced(res.word, margin=3)
    assert compare(again, res.markoff) == 0


def test_hall_construct_rejects_small_alpha():
    with pytest.raises(ValueError, match="below Hall ray threshold"):
        hall_construct(4 * SQRT2, Fraction(1, 10**6))
    with pytest.raises(ValueError):
        hall_construct(6, 0)


def test_hall_lagrange_blocks():
    alpha = 7
    res = hall_lagrange_construct(alpha, 3, Fraction(1, 10**9))
    assert res.enclosures[0].width() < Fraction(1, 10**12)
    assert all(e.width() < Fraction(1, 10**20) for e in res.enclosures[1:])
    for e in res.enclosures:
        assert abs(e.mid() - 7) < Fraction(1, 10**8)
    assert all(len(a) < len(b) for a, b in zip(res.blocks, res.blocks[1:]))
