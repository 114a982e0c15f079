from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hecke4.gaps import (
    LOWER_GAP_END,
    M0,
    SQRT10,
    U_WORD,
    canonical_cycles,
    gap_certify,
    limit_point_family,
    prune_bound,
    u_word,
)
from hecke4.qfield import compare, sqrt, to_decimal
from hecke4.romik import primitive_root
from hecke4.spectra import canonical_cycle, markoff_periodic, markoff_spliced
from strategies import cycles


def test_constants():
    assert to_decimal(M0, 12) == "3.181221359615"
    assert compare(LOWER_GAP_END, SQRT10) < 0 < compare(M0, SQRT10)
    assert LOWER_GAP_END == sqrt(238) / 5


def test_u_word_shape():
    assert str(U_WORD) == "(21312313)23232(31321312)"
    assert u_word(1).middle == (2, 3, 2, 3, 2) + (3, 1, 3, 2, 1, 3, 1, 2) + (3, 1, 3, 2) + (3, 2, 3, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_canonical_cycles_cover_each_class_once(n):
    brute = set()
    for length in range(1, n + 1):
        for w in itertools.product((1, 2, 3), repeat=length):
            if primitive_root(w) == w:
                brute.add(canonical_cycle(w))
    got = list(canonical_cycles(n))
    assert len(got) == len(set(got))
    assert set(got) == brute


@given(cycles(7), st.sampled_from([(3, 3, 3), (2, 3, 3), (1, 3, 3, 1), (1, 2, 3, 2), (3, 2, 1, 2)]), st.integers(0, 6))
def test_prune_bounds_are_lower_bounds(cycle, block, pos):
    pos %= len(cycle) + 1
    w = cycle[:pos] + block + cycle[pos:]
    assume(set(w) not in ({1}, {3}))
    bound = prune_bound(w)
    assert bound is not None
    assert compare(markoff_periodic(w), bound) >= 0


def test_prune_bound_none_for_clean_word():
    assert prune_bound((3, 2)) is None


def test_gap_certify_small():
    rep = gap_certify(LOWER_GAP_END, SQRT10, 8)
    assert rep.passed
    assert "(12313213)" in rep.endpoint_witnesses["lo"]
    assert "(12)" in rep.endpoint_witnesses["hi"]
    up = gap_certify(SQRT10, M0, 8)
    assert up.passed and str(U_WORD) in up.endpoint_witnesses["hi"]


def test_gap_certify_parallel_agrees():
    a = gap_certify(SQRT10, M0, 8, jobs=1)
    b = gap_certify(SQRT10, M0, 8, jobs=2)
    assert (a.words_scanned, a.words_pruned, a.passed) == (b.words_scanned, b.words_pruned, b.passed)
    assert sorted(a.endpoint_witnesses["lo"]) == sorted(b.endpoint_witnesses["lo"])


def test_negative_control_finds_values():
    rep = gap_certify(Fraction(282, 100), Fraction(284, 100), 8)
    assert not rep.passed
    for word, v in rep.violations:
        assert compare(v, Fraction(282, 100)) > 0 and compare(v, Fraction(284, 100)) < 0


def test_gap_certify_rejects_bad_input():
    with pytest.raises(ValueError):
        gap_certify(SQRT10, LOWER_GAP_END, 5)
    with pytest.raises(ValueError):
        gap_certify(1, 2, 0)


def test_limit_family():
    fam = limit_point_family(4)
    vals = [v for _, _, v in fam]
    assert all(compare(v, M0) > 0 for v in vals)
    assert all(compare(a, b) > 0 for a, b in zip(vals, vals[1:]))
    for _, iv, v in fam:
        assert v in iv
    _, m = markoff_spliced(U_WORD)
    assert m == M0
