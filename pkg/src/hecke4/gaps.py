"""Bounded certification of spectral gaps and the limit family U_k."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .qfield import SQRT2, compare, sqrt, to_interval
from .romik import Word, reverse, vee
from .spectra import SplicedBiWord, canonical_cycle, markoff_periodic, markoff_spliced

__all__ = [
    "M0",
    "SQRT10",
    "LOWER_GAP_END",
    "S_BLOCK",
    "U_WORD",
    "u_word",
    "GapReport",
    "prune_bound",
    "canonical_cycles",
    "gap_certify",
    "limit_point_family",
]

M0 = (2124 * SQRT2 + 48 * sqrt(238)) / 1177
SQRT10 = sqrt(10)
LOWER_GAP_END = sqrt(238) / 5

S_BLOCK = (3, 1, 3, 2, 1, 3, 1, 2)
_S_REV = reverse(S_BLOCK)


def u_word(k: int | None = None) -> SplicedBiWord:
    """S* 23232 S for k=None; otherwise U_k = S* 23232 S_k 3232 S with S_k = S^k 3132."""
    if k is None:
        middle = (2, 3, 2, 3, 2)
    else:
        middle = (2, 3, 2, 3, 2) + S_BLOCK * k + (3, 1, 3, 2) + (3, 2, 3, 2)
    return SplicedBiWord(_S_REV, middle, S_BLOCK)


U_WORD = u_word()

# forbidden blocks with the lower bound they force on M(T); checked in order
_RULES = (
    ((3, 3, 3), 3 * SQRT2),
    ((2, 3, 3), 5 * SQRT2 / 2),
    ((1, 3, 3, 1), 2 * (sqrt(7) - SQRT2) / 5 + 2 * SQRT2),
    ((1, 2, 3, 2), 3 * SQRT2 / 4 + SQRT2 / 2 + SQRT2),
    ((3, 2, 1, 2), 3 * SQRT2 / 4 + SQRT2 / 2 + SQRT2),
)


def _contains_cyclic(cycle: Word, block: Word) -> bool:
    n = len(cycle)
    reps = (len(block) + n - 1) // n + 1
    s = cycle * reps
    b = len(block)
    return any(s[i : i + b] == block for i in range(n))


def prune_bound(cycle) -> object | None:
    """A lower bound for M(T) forced by a block of the cycle (or of its vee/reversal), else None."""
    if hasattr(cycle, "cycle"):
        cycle = cycle.cycle
    cycle = tuple(cycle)
    forms = (cycle, vee(cycle), reverse(cycle), reverse(vee(cycle)))
    for block, bound in _RULES:
        if any(_contains_cyclic(f, block) for f in forms):
            return bound
    return None


def _lyndon_words(max_len: int) -> Iterator[Word]:
    """Duval's generator for Lyndon words over {1,2,3} of length <= max_len."""
    w = [0]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == 3:
            w.pop()


def canonical_cycles(max_len: int, min_len: int = 1) -> Iterator[Word]:
    """Primitive cycles of length in [min_len, max_len], one per class under rotation, reversal and vee."""
    for w in _lyndon_words(max_len):
        if len(w) >= min_len and canonical_cycle(w) == w:
            yield w


@dataclass
class GapReport:
    lo: object
    hi: object
    max_len: int
    words_scanned: int = 0
    words_pruned: int = 0
    violations: list = field(default_factory=list)
    endpoint_witnesses: dict = field(default_factory=lambda: {"lo": [], "hi": []})

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: GapReport) -> None:
        self.words_scanned += other.words_scanned
        self.words_pruned += other.words_pruned
        self.violations.extend(other.violations)
        for key in ("lo", "hi"):
            self.endpoint_witnesses[key].extend(other.endpoint_witnesses[key])


def _fmt(w: Word) -> str:
    return "(" + "".join(map(str, w)) + ")"


def _scan(lo, hi, words: Iterable[Word], max_len: int) -> GapReport:
    rep = GapReport(lo, hi, max_len)
    for w in words:
        if w in ((1,), (3,)):
            continue
        rep.words_scanned += 1
        bound = prune_bound(w)
        if bound is not None and compare(bound, hi) >= 0:
            rep.words_pruned += 1
            continue
        v = markoff_periodic(w)
        c_lo = compare(v, lo)
        if c_lo < 0:
            continue
        c_hi = compare(v, hi)
        if c_lo == 0:
            rep.endpoint_witnesses["lo"].append(_fmt(w))
        elif c_hi == 0:
            rep.endpoint_witnesses["hi"].append(_fmt(w))
        elif c_hi < 0:
            rep.violations.append((_fmt(w), v))
    return rep


def _scan_chunk(args) -> GapReport:
    lo, hi, words, max_len = args
    return _scan(lo, hi, words, max_len)


def gap_certify(lo, hi, max_len: int, jobs: int = 1, spliced_witnesses: Iterable[SplicedBiWord] = (U_WORD,)) -> GapReport:
    """Check that no periodic word with cycle length <= max_len has M(T) inside (lo, hi).

    Spliced words in ``spliced_witnesses`` are evaluated as well and may supply
    endpoint witnesses or violations.
    """
    if compare(lo, hi) >= 0:
        raise ValueError("need lo < hi")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    words = list(canonical_cycles(max_len))
    if jobs <= 1:
        rep = _scan(lo, hi, words, max_len)
    else:
        chunks = [words[i::jobs * 4] for i in range(jobs * 4)]
        rep = GapReport(lo, hi, max_len)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_scan_chunk, [(lo, hi, c, max_len) for c in chunks]):
                rep.merge(part)
    for sw in spliced_witnesses:
        _, v = markoff_spliced(sw)
        c_lo, c_hi = compare(v, lo), compare(v, hi)
        if c_lo == 0:
            rep.endpoint_witnesses["lo"].append(str(sw))
        elif c_hi == 0:
            rep.endpoint_witnesses["hi"].append(str(sw))
        elif c_lo > 0 and c_hi < 0:
            rep.violations.append((str(sw), v))
    return rep


def limit_point_family(k_max: int, tol=Fraction(1, 10**30)) -> list[tuple[int, object, object]]:
    """(k, enclosure, exact value) of M(U_k) for k = 1..k_max."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    out = []
    for k in range(1, k_max + 1):
        iv, exact = markoff_spliced(u_word(k), tol)
        out.append((k, iv, exact))
    return out
