from __future__ import annotations

import pytest

from hecke4.qfield import SQRT2, compare, sqrt
from hecke4.spectra import markoff_periodic
from hecke4.triples import VSTriple, discrete_spectrum, enumerate_triples, n2_m2_sets, neighbors


def _brute(bound):
    return {
        VSTriple(x, a, b)
        for x in range(1, bound + 1)
        for a in range(1, bound + 1)
        for b in range(a, bound + 1)
        if 2 * x * x + a * a + b * b == 4 * x * a * b
    }


def test_validation():
    VSTriple(5, 1, 3)
    with pytest.raises(ValueError):
        VSTriple(2, 1, 1)
    with pytest.raises(ValueError):
        VSTriple(0, 1, 1)


def test_neighbors_are_involutions():
    t = VSTriple(5, 3, 59)
    for i, nb in enumerate(neighbors(t)):
        assert nb is not None
        assert neighbors(nb)[i] == t


def test_root_neighbors():
    assert neighbors(VSTriple(1, 1, 1)) == [VSTriple(1, 1, 1), VSTriple(1, 3, 1), VSTriple(1, 1, 3)]


@pytest.mark.parametrize("bound", [10, 60, 150])
def test_enumeration_matches_brute_force(bound):
    assert enumerate_triples(bound) == _brute(bound)


def test_published_sets():
    xs, ys = n2_m2_sets(400)
    assert xs[:6] == [1, 5, 29, 65, 169, 349]
    assert ys[:6] == [1, 3, 11, 17, 41, 59]


def test_discrete_spectrum_start_and_order():
    vals = discrete_spectrum(60)
    assert [v.value for v in vals[:3]] == [2, sqrt(6), 2 * sqrt(17) / 3]
    assert all(compare(a.value, b.value) < 0 for a, b in zip(vals, vals[1:]))
    assert all(compare(v.value, 2 * SQRT2) < 0 for v in vals)


def test_spectrum_matches_geodesics():
    vals = discrete_spectrum(20)
    by_word = {(2,): vals[0], (3, 1): vals[1], (3, 1, 2, 1, 3, 2): vals[2]}
    for cycle, sv in by_word.items():
        assert markoff_periodic(cycle) == sv.value


def test_bad_bound():
    with pytest.raises(ValueError):
        enumerate_triples(0)
