"""The Cantor set F (words starting with 1 or 2 that avoid 111 and 333), its dissection, F+F and Hall's ray."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qfield import SQRT2, DyadicInterval, compare, sign, sqrt, to_interval
from .romik import EvPeriodicWord, Word, eval_word, reverse, word_matrix
from .spectra import SplicedBiWord, markoff_spliced

__all__ = [
    "S_CYCLE",
    "S_VEE_CYCLE",
    "DissectionInterval",
    "F0",
    "dissect",
    "gap_ratio_check",
    "interval_cond_constants",
    "f_sum_range",
    "sum_decompose",
    "hall_construct",
    "hall_lagrange_construct",
    "HallResult",
    "HallLagrangeResult",
    "section_constants",
]

S_CYCLE: Word = (3, 3, 2, 1, 1, 2)
S_VEE_CYCLE: Word = (1, 1, 2, 3, 3, 2)

TYPES = ("I", "II", "III", "IV", "V", "VI")


def _sw(stem: Word, vee_tail: bool) -> EvPeriodicWord:
    """[stem, S^vee] if vee_tail else [stem, S]."""
    return EvPeriodicWord(stem, S_VEE_CYCLE if vee_tail else S_CYCLE)


def section_constants() -> dict:
    """The eight tail values used throughout the dissection estimates."""
    words = {
        "S": _sw((), False),
        "S_vee": _sw((), True),
        "1S": _sw((1,), False),
        "3S_vee": _sw((3,), True),
        "2S": _sw((2,), False),
        "2S_vee": _sw((2,), True),
        "12S": _sw((1, 2), False),
        "32S_vee": _sw((3, 2), True),
    }
    return {k: eval_word(w) for k, w in words.items()}


@dataclass(frozen=True)
class DissectionInterval:
    """An interval of the dissection of F, given by its type and digit stem.

    Endpoints (with s the stem):
      I   <[s,S^v], [s,1,S]>         II  <[s,2,S^v], [s,2,S]>
      III <[s,3,S^v], [s,S]>         IV  <[s,1,1,2,S], [s,1,1,S]>
      V   <[s,S^v], [s,2,S^v]>       VI  <[s,S^v], [s,1,2,S^v]>
    """

    dtype: str
    stem: Word

    def __post_init__(self):
        if self.dtype not in TYPES:
            raise ValueError(f"unknown interval type {self.dtype!r}")
        last = self.stem[-1] if self.stem else None
        forbidden = {"I": 1, "III": 3, "IV": 1, "V": 1, "VI": 1}.get(self.dtype)
        if forbidden is not None and last == forbidden:
            raise ValueError(f"type {self.dtype} needs a stem not ending in {forbidden}: {self.stem}")

    def endpoint_words(self) -> tuple[EvPeriodicWord, EvPeriodicWord]:
        s = self.stem
        t = self.dtype
        if t == "I":
            return _sw(s, True), _sw(s + (1,), False)
        if t == "II":
            return _sw(s + (2,), True), _sw(s + (2,), False)
        if t == "III":
            return _sw(s + (3,), True), _sw(s, False)
        if t == "IV":
            return _sw(s + (1, 1, 2), False), _sw(s + (1, 1), False)
        if t == "V":
            return _sw(s, True), _sw(s + (2,), True)
        return _sw(s, True), _sw(s + (1, 2), True)

    def bounds(self):
        """(lo, hi, lo_word, hi_word) with exact values."""
        a, b = self.endpoint_words()
        va, vb = eval_word(a), eval_word(b)
        if compare(va, vb) <= 0:
            return va, vb, a, b
        return vb, va, b, a

    def width(self):
        lo, hi, _, _ = self.bounds()
        return hi - lo

    def children(self) -> tuple[DissectionInterval, DissectionInterval]:
        s = self.stem
        t = self.dtype
        if t == "I":
            pair = (DissectionInterval("VI", s), DissectionInterval("III", s + (1,)))
        elif t == "II":
            pair = (DissectionInterval("V", s + (2,)), DissectionInterval("III", s + (2,)))
        elif t == "III":
            pair = (DissectionInterval("V", s + (3,)), DissectionInterval("V", s + (3, 3)))
        elif t == "IV":
            pair = (DissectionInterval("II", s + (1, 1)), DissectionInterval("III", s + (1, 1)))
        elif t == "V":
            pair = (DissectionInterval("I", s), DissectionInterval("II", s))
        else:
            pair = (DissectionInterval("IV", s), DissectionInterval("II", s + (1,)))
        a, b = pair
        if compare(a.bounds()[0], b.bounds()[0]) > 0:
            a, b = b, a
        return a, b

    def __str__(self) -> str:
        return f"{self.dtype}[{''.join(map(str, self.stem))}]"


F0 = DissectionInterval("V", ())


def dissect(iv: DissectionInterval):
    """(left child, right child, removed gap) with the gap as an exact (lo, hi) pair."""
    left, right = iv.children()
    gap = (left.bounds()[1], right.bounds()[0])
    return left, right, gap


def gap_ratio_check(iv: DissectionInterval, eps=Fraction(1, 10**12)):
    """Enclosures of |J|/|I1| and |J|/|I2| for the gap J between the children I1 < I2."""
    left, right, (g_lo, g_hi) = dissect(iv)
    gap = g_hi - g_lo
    return (
        to_interval(gap / left.width(), eps),
        to_interval(gap / right.width(), eps),
    )


def interval_cond_constants() -> dict:
    """The seven stem-independent bounds for the gap/child ratios, computed exactly."""
    k = section_constants()
    S, Sv, s1, s3v = k["S"], k["S_vee"], k["1S"], k["3S_vee"]
    s2, s2v, s12, s32v = k["2S"], k["2S_vee"], k["12S"], k["32S_vee"]
    r2 = SQRT2
    return {
        "0.5025": (s3v - s2v) / (s2v - s12),
        "0.5893": S * (s3v - s2v) / (s2v * (S - s3v)),
        "0.4354": (s3v - s2v) / (s2v - Sv),
        "0.9354": s32v * (s3v - s2v) / (s2v * (s32v - s3v)),
        "0.5760": (s2 + r2 / 5) / (s3v + r2 / 5) * (s3v - s2v) / (s2v - s2),
        "0.7403": (r2 * s2v + 1) / (r2 * s1 + 1) * (s2 - s1) / (s2v - s2),
        "0.8292": (2 * r2 * s2v + 1) / (2 * r2 * s1 + 1) * (s2 - s1) / (s2v - s2),
    }


def f_sum_range():
    """Exact endpoints of F + F: twice the minimum and twice the maximum of F."""
    lo, hi, _, _ = F0.bounds()
    return lo + lo, hi + hi


@dataclass(frozen=True)
class Decomposition:
    first: DissectionInterval
    second: DissectionInterval
    first_word: EvPeriodicWord
    second_word: EvPeriodicWord
    steps: int


def sum_decompose(t, eps) -> Decomposition:
    """Find F-intervals I, J with t in I + J and |I| + |J| <= eps.

    The wider interval is dissected and the left child is preferred whenever
    it still admits t; a depth-first search recovers if neither child does.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo, hi = f_sum_range()
    if compare(t, lo) < 0 or compare(t, hi) > 0:
        raise ValueError("t lies outside F + F")
    stack = [(F0, F0)]
    steps = 0
    while stack:
        a, b = stack.pop()
        steps += 1
        alo, ahi, aw, _ = a.bounds()
        blo, bhi, bw, _ = b.bounds()
        if compare(t, alo + blo) < 0 or compare(t, ahi + bhi) > 0:
            continue
        wa, wb = ahi - alo, bhi - blo
        if compare(wa + wb, eps) <= 0:
            return Decomposition(a, b, aw, bw, steps)
        if compare(wa, wb) >= 0:
            c1, c2 = a.children()
            stack.extend([(c2, b), (c1, b)])
        else:
            c1, c2 = b.children()
            stack.extend([(a, c2), (a, c1)])
    raise ArithmeticError("no decomposition found")


@dataclass(frozen=True)
class HallResult:
    alpha: object
    n: int
    first: EvPeriodicWord
    second: EvPeriodicWord
    word: SplicedBiWord
    markoff: object
    enclosure: DyadicInterval
    error: object


def _choose_n(alpha):
    lo, hi = f_sum_range()
    n = 2
    while True:
        t = alpha - n * SQRT2
        if compare(t, hi) <= 0:
            if compare(t, lo) < 0:
                raise ArithmeticError("no admissible n")
            return n, t
        n += 1


def hall_construct(alpha, eps) -> HallResult:
    """A spliced word T with |M(T) - alpha| <= eps, for alpha > 4*sqrt2."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if compare(alpha, 4 * SQRT2) <= 0:
        raise ValueError("below Hall ray threshold: alpha must exceed 4*sqrt2")
    n, t = _choose_n(alpha)
    dec = sum_decompose(t, eps)
    p1, p2 = dec.first_word, dec.second_word
    middle = reverse(p1.prefix) + (3,) * n + p2.prefix
    word = SplicedBiWord(reverse(p1.cycle), middle, p2.cycle)
    enclosure, value = markoff_spliced(word, Fraction(eps, 1000))
    err = abs(value - alpha)
    if compare(err, eps) > 0:
        raise ArithmeticError(f"construction missed alpha: |M(T) - alpha| = {float(err)}")
    return HallResult(alpha, n, p1, p2, word, value, enclosure, err)


# ---------------------------------------------------------------------------
# Lagrange version


def _cylinder(digits: Word, eps=Fraction(1, 10**40)) -> DyadicInterval:
    """Enclosure of {[digits, X]} over all continuations X."""
    m = word_matrix(tuple(digits))
    lo_end = m.apply(0)
    hi_end = m.a / m.c if m.c else None
    if hi_end is None:
        raise ValueError("cylinder of an all-3 word is unbounded")
    a = to_interval(lo_end, eps)
    b = to_interval(hi_end, eps)
    return a.hull(b)


@dataclass(frozen=True)
class HallLagrangeResult:
    base: HallResult
    blocks: list
    enclosures: list


def hall_lagrange_construct(alpha, depth: int, eps=Fraction(1, 10**9), growth: int = 12) -> HallLagrangeResult:
    """First ``depth`` blocks t_{-k_j} ... t_{l_j} of a sequence with Lagrange value alpha.

    Block j extends the central window of the Hall word T by about growth*j
    digits on each side, cutting at a digit 2 (both tails have 2 in every
    period).  The enclosure for block j bounds the section at the start of the
    3^n run inside that block, using only digits fixed by the blocks around it.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    base = hall_construct(alpha, eps)
    w = base.word
    start = len(base.first.prefix)  # position of the first 3 of the run
    m = len(w.middle)
    blocks: list[Word] = []
    starts: list[int] = []
    for j in range(1, depth + 1):
        lo_pos = _next_two(w, -growth * j, -1)
        hi_pos = _next_two(w, m - 1 + growth * j, 1)
        starts.append(lo_pos)
        blocks.append(tuple(w.digit(p) for p in range(lo_pos, hi_pos + 1)))
    seq = [d for b in blocks for d in b]
    enclosures = []
    offset = 0
    for block, lo_pos in zip(blocks, starts):
        cut = offset + (start - lo_pos)
        enclosures.append(_cylinder(tuple(reversed(seq[:cut]))) + _cylinder(tuple(seq[cut:])))
        offset += len(block)
    return HallLagrangeResult(base, blocks, enclosures)


def _next_two(w: SplicedBiWord, pos: int, step: int) -> int:
    while w.digit(pos) != 2:
        pos += step
    return pos
