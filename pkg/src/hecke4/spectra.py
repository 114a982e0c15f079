"""Markoff and Lagrange values of Romik words, and the binary-form cross-check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .qfield import (
    INF,
    AlgSum,
    DyadicInterval,
    QSqrt2,
    QuadExt,
    SQRT2,
    compare,
    quad,
    sign,
    sqrt,
    to_interval,
)
from .romik import (
    BiSection,
    EvPeriodicWord,
    Word,
    _check_digits,
    eval_word,
    primitive_root,
    reverse,
    rotations,
    vee,
)

__all__ = [
    "PeriodicBiWord",
    "SplicedBiWord",
    "QuadForm",
    "section_value",
    "section_pair_value",
    "markoff_periodic",
    "markoff_periodic_argmax",
    "markoff_spliced",
    "lagrange_ev_periodic",
    "lagrange_leq_markoff_check",
    "form_from_geodesic",
    "brute_force_ratio",
    "canonical_cycle",
    "DegenerateWordError",
]


class DegenerateWordError(ValueError):
    """Raised for the words (1) and (3), whose sections reach infinity."""


def _vmax(values: Iterable):
    best = None
    for v in values:
        if best is None or compare(v, best) > 0:
            best = v
    return best


def canonical_cycle(cycle: Iterable[int]) -> Word:
    """Smallest representative among rotations, reversals and their vee images."""
    c = primitive_root(_check_digits(cycle))
    if not c:
        raise ValueError("cycle must be nonempty")
    forms = (c, reverse(c), vee(c), reverse(vee(c)))
    return min(r for f in forms for r in rotations(f))


@dataclass(frozen=True)
class PeriodicBiWord:
    """The doubly infinite word ...cycle cycle cycle..., up to shift, reversal and vee."""

    cycle: Word

    def __init__(self, cycle: Iterable[int] | str):
        if isinstance(cycle, str):
            cycle = cycle.strip().strip("()")
        object.__setattr__(self, "cycle", canonical_cycle(cycle))

    def __str__(self) -> str:
        return "(" + "".join(map(str, self.cycle)) + ")"


@dataclass(frozen=True)
class SplicedBiWord:
    """^inf(left_cycle) middle (right_cycle)^inf, with left_cycle written in reading order."""

    left_cycle: Word
    middle: Word
    right_cycle: Word

    def __init__(self, left_cycle, middle, right_cycle):
        lc, mid, rc = (
            _check_digits(map(int, str(x)) if isinstance(x, str) else x)
            for x in (left_cycle, middle, right_cycle)
        )
        if not lc or not rc:
            raise ValueError("both cycles must be nonempty")
        object.__setattr__(self, "left_cycle", lc)
        object.__setattr__(self, "middle", mid)
        object.__setattr__(self, "right_cycle", rc)

    def __str__(self) -> str:
        s = "".join
        return f"({s(map(str, self.left_cycle))}){s(map(str, self.middle))}({s(map(str, self.right_cycle))})"

    def digit(self, p: int) -> int:
        m = len(self.middle)
        if 0 <= p < m:
            return self.middle[p]
        if p >= m:
            return self.right_cycle[(p - m) % len(self.right_cycle)]
        return self.left_cycle[p % len(self.left_cycle)]

    def cut(self, p: int) -> BiSection:
        """Section between positions p-1 and p."""
        m = len(self.middle)
        rc, lc = self.right_cycle, self.left_cycle
        q_prefix = tuple(self.digit(i) for i in range(p, m))
        start = max(p, m)
        q_cycle = tuple(self.digit(start + i) for i in range(len(rc)))
        p_prefix = tuple(self.digit(i) for i in range(p - 1, -1, -1))
        start = min(p, 0)
        p_cycle = tuple(self.digit(start - 1 - i) for i in range(len(lc)))
        return BiSection(EvPeriodicWord(p_prefix, p_cycle), EvPeriodicWord(q_prefix, q_cycle))


def section_value(s: BiSection):
    """L(P*|Q) = [P] + [Q]; INF if either side is infinite."""
    return s.value()


def section_pair_value(s: BiSection):
    """max(L(P*|Q), L of the vee image) = max([P]+[Q], 1/[P]+1/[Q])."""
    p, q = eval_word(s.left), eval_word(s.right)
    if p is INF or q is INF or sign(p) == 0 or sign(q) == 0:
        return INF
    a, b = p + q, p.inverse() + q.inverse()
    return a if compare(a, b) >= 0 else b


def _cycle_sections(cycle: Word):
    for r in rotations(cycle):
        yield BiSection(EvPeriodicWord((), reverse(r)), EvPeriodicWord((), r))


def markoff_periodic_argmax(cycle) -> tuple[object, BiSection]:
    """M(T) of the periodic word together with a section attaining it."""
    if isinstance(cycle, PeriodicBiWord):
        cycle = cycle.cycle
    elif isinstance(cycle, str):
        cycle = tuple(map(int, cycle.strip().strip("()")))
    cycle = primitive_root(_check_digits(cycle))
    if cycle in ((1,), (3,)):
        raise DegenerateWordError(f"the word ({cycle[0]}) has infinite Markoff value")
    best, arg = None, None
    for s in _cycle_sections(cycle):
        v = section_pair_value(s)
        if best is None or compare(v, best) > 0:
            best, arg = v, s
    return best, arg


def markoff_periodic(cycle):
    """M(T) for T = ^inf(cycle)^inf; exact."""
    return markoff_periodic_argmax(cycle)[0]


def lagrange_ev_periodic(w: EvPeriodicWord | str):
    """Lagrange value of an eventually periodic one-sided word: only the tail cycle matters."""
    if isinstance(w, str):
        w = EvPeriodicWord.parse(w)
    return markoff_periodic(w.cycle)


def markoff_spliced(w: SplicedBiWord, tol=Fraction(1, 10**9), margin: int = 1):
    """Supremum of section values of a spliced word.

    Returns (enclosure, exact) where exact is the value as an element of a
    single quadratic extension when the maximizing section allows it, else None.

    Cuts deeper in a tail than one double period differ from a nearer cut by a
    power of a positive determinant-one matrix applied to one side, so their
    values are monotone and lie between the nearer value and a periodic
    section value of the tail.  Evaluating the cuts in
    [-2|L|, m + 2|R|) together with both tail Markoff values is therefore exact.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = len(w.middle)
    lo = -2 * len(w.left_cycle) * margin
    hi = m + 2 * len(w.right_cycle) * margin
    candidates = [section_pair_value(w.cut(p)) for p in range(lo, hi)]
    for cyc in (w.left_cycle, w.right_cycle):
        if primitive_root(cyc) in ((1,), (3,)):
            candidates.append(INF)
        else:
            candidates.append(markoff_periodic(cyc))
    best = _vmax(candidates)
    if best is INF:
        return None, INF
    exact = best if isinstance(best, (QSqrt2, QuadExt)) else None
    return to_interval(best, tol), (exact if exact is not None else best)


def lagrange_leq_markoff_check(cycle, prefixes: Iterable[Word] | None = None, depth: int = 6) -> bool:
    """Check L(P) <= M(T) for one-sided words P = prefix (cycle)^inf.

    The Lagrange value is the largest limit of section values of ^inf 3 P as
    the cut moves right.  For each residue of the cut modulo a double period
    the section values converge to an explicit periodic section value; the
    check confirms the convergence numerically and the bound exactly.
    """
    if isinstance(cycle, PeriodicBiWord):
        cycle = cycle.cycle
    cycle = primitive_root(_check_digits(cycle))
    bound = markoff_periodic(cycle)
    if prefixes is None:
        prefixes = [(), (1,), (2,), (3,), (1, 2), (3, 2), (2, 1, 3)]
    n = len(cycle)
    eps = Fraction(1, 10**30)
    for prefix in prefixes:
        sw = SplicedBiWord((3,), prefix, cycle)
        m = len(prefix)
        limits = []
        for residue in range(2 * n):
            limit = _tail_limit(sw, m + residue)
            lim_iv = to_interval(limit, eps)
            gaps = []
            for j in (1, depth):
                v = to_interval(section_pair_value(sw.cut(m + residue + 2 * n * j)), eps)
                gaps.append(max(abs(v.hi - lim_iv.lo), abs(lim_iv.hi - v.lo)))
            if gaps[1] > gaps[0] + 2 * eps:
                return False
            limits.append(limit)
        if compare(_vmax(limits), bound) > 0:
            return False
    return True


def _tail_limit(sw: SplicedBiWord, p: int):
    q = sw.cut(p).right
    p_cycle = reverse(q.cycle)
    return section_pair_value(BiSection(EvPeriodicWord((), p_cycle), q))


# ---------------------------------------------------------------------------
# binary quadratic forms


@dataclass(frozen=True)
class QuadForm:
    """f(x, y) = a x^2 + b x y + c y^2 = a (x - r1 y)(x - r2 y)."""

    a: object
    b: object
    c: object
    roots: tuple = ()

    @property
    def discriminant(self):
        if self.roots:
            d = self.roots[0] - self.roots[1]
            return self.a * self.a * d * d
        return self.b * self.b - 4 * self.a * self.c

    def sqrt_discriminant(self):
        """sqrt(b^2 - 4ac), exact when the roots are known."""
        if self.roots:
            return abs(self.a * (self.roots[0] - self.roots[1]))
        return sqrt(self.discriminant)

    def __call__(self, x: int, y: int):
        return self.a * (x * x) + self.b * (x * y) + self.c * (y * y)


def form_from_geodesic(xi, eta) -> QuadForm:
    """The form (x - sqrt2*xi*y)(x - sqrt2*eta*y), whose discriminant is 2(eta - xi)^2."""
    if xi is INF or eta is INF:
        raise ValueError("endpoints must be finite")
    if compare(xi, eta) == 0:
        raise ValueError("endpoints must be distinct")
    s = xi + eta
    if isinstance(s, AlgSum):
        raise ValueError("endpoints must lie in a common quadratic field")
    return QuadForm(QSqrt2(1), -SQRT2 * s, 2 * (xi * eta), (SQRT2 * xi, SQRT2 * eta))


def brute_force_ratio(f: QuadForm, box: int, eps=Fraction(1, 10**12)) -> DyadicInterval:
    """Enclosure of sqrt(disc)/m over the box |x|, |y| <= box.

    m is the minimum of |f|/2 over nonzero points with x even and of |f| over
    points with x odd.  Restricting to a box gives a lower bound for the
    ratio that increases with the box.
    """
    if box < 1:
        raise ValueError("box must be >= 1")
    if not f.roots:
        raise ValueError("form must be built from its roots (see form_from_geodesic)")
    root_disc = f.sqrt_discriminant()
    fl = lambda v: float(to_interval(v, Fraction(1, 2**40)).mid())
    r1, r2 = fl(f.roots[0]), fl(f.roots[1])
    best = None
    for y in range(0, box + 1):
        xs = {-box, box, -box + 1, box - 1}
        for r in (r1, r2):
            c = math.floor(r * y)
            xs.update(range(c - 2, c + 4))
        for x in xs:
            if abs(x) > box or (x == 0 and y == 0):
                continue
            if y == 0 and x < 0:
                continue
            v = f.a * (x - f.roots[0] * y) * (x - f.roots[1] * y)
            if sign(v) == 0:
                raise ArithmeticError("parabolic endpoint, ratio unbounded")
            v = abs(v)
            if x % 2 == 0:
                v = v / 2
            if best is None or compare(v, best) < 0:
                best = v
    ratio = root_disc / best
    return to_interval(ratio, eps)
