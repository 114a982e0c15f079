"""Romik's map on the quarter circle, the Pythagorean triple tree and Diophantine scans on S^1."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .qfield import INF, SQRT2, QSqrt2, _lift, sign, to_interval
from .romik import EvPeriodicWord, _digit_of, digit_matrix

__all__ = [
    "CirclePointQ",
    "HeightedRational",
    "romik_step",
    "romik_orbit",
    "berggren_children",
    "pythagoras_tree",
    "ROOTS",
    "stereo",
    "stereo_triple",
    "mod_proj",
    "ApproxEstimate",
    "lagrange_estimate",
    "circle_lagrange_estimate",
    "even_cf",
    "even_cf_value",
]


@dataclass(frozen=True, order=True)
class CirclePointQ:
    """The rational point (a/c, b/c) of the unit circle, with gcd(a, b, c) = 1."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.a * self.a + self.b * self.b != self.c * self.c:
            raise ValueError(f"{self.as_tuple()} is not Pythagorean")
        if math.gcd(self.a, self.b, self.c) != 1:
            raise ValueError(f"{self.as_tuple()} is not primitive")

    @classmethod
    def reduced(cls, a: int, b: int, c: int) -> CirclePointQ:
        g = math.gcd(a, b, c)
        if c < 0:
            g = -g
        return cls(a // g, b // g, c // g)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def coords(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, self.c), Fraction(self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class HeightedRational:
    """p/q in lowest terms with height q^2/2 when p + q is even and q^2 otherwise."""

    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0 or math.gcd(self.p, self.q) != 1:
            raise ValueError("need q > 0 and gcd(p, q) = 1")

    @property
    def height(self) -> Fraction:
        h = Fraction(self.q * self.q)
        return h / 2 if (self.p + self.q) % 2 == 0 else h


def _as_point(pt) -> CirclePointQ:
    if isinstance(pt, CirclePointQ):
        return pt
    return CirclePointQ(*pt)


def _digit(a: int, c: int) -> int:
    if 5 * a >= 4 * c:
        return 1
    if 5 * a <= 3 * c:
        return 3
    return 2


def romik_step(pt) -> tuple[CirclePointQ, int]:
    """(T(pt), digit of pt) computed on the integer triple."""
    pt = _as_point(pt)
    a, b, c = pt.as_tuple()
    if a < 0 or b < 0:
        raise ValueError("point must lie in the closed first quadrant")
    image = CirclePointQ.reduced(abs(2 * c - a - 2 * b), abs(2 * c - 2 * a - b), 3 * c - 2 * a - 2 * b)
    return image, _digit(a, c)


FIXED = (CirclePointQ(1, 0, 1), CirclePointQ(0, 1, 1))


def romik_orbit(pt, max_steps: int = 100_000) -> list[tuple[CirclePointQ, int]]:
    """Orbit of a rational point until it lands on (1,0) or (0,1); pairs (point, digit)."""
    pt = _as_point(pt)
    out = []
    for _ in range(max_steps):
        nxt, d = romik_step(pt)
        out.append((pt, d))
        if pt in FIXED:
            return out
        pt = nxt
    raise ArithmeticError("orbit did not terminate")


# inverse branches H o U_d, as integer matrices acting on (a, b, c)
_BRANCH = {
    1: ((-1, 2, 2), (-2, 1, 2), (-2, 2, 3)),
    2: ((1, 2, 2), (2, 1, 2), (2, 2, 3)),
    3: ((1, -2, 2), (2, -1, 2), (2, -2, 3)),
}

ROOTS = (CirclePointQ(3, 4, 5), CirclePointQ(4, 3, 5))


def _apply(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(3)) for i in range(3))


def _matmul(m, n):
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def berggren_children(t) -> tuple[CirclePointQ, CirclePointQ, CirclePointQ]:
    """Children of t under digits 1, 2, 3; romik_step maps child d back to t with digit d."""
    t = _as_point(t)
    if min(t.as_tuple()) <= 0:
        raise ValueError("need a, b, c > 0")
    return tuple(CirclePointQ(*_apply(_BRANCH[d], t.as_tuple())) for d in (1, 2, 3))


def _subtree(args) -> list[CirclePointQ]:
    root, cmax = args
    out, stack = [], [root]
    while stack:
        t = stack.pop()
        if t.c > cmax:
            continue
        out.append(t)
        stack.extend(berggren_children(t))
    return out


def pythagoras_tree(cmax: int, jobs: int = 1) -> list[CirclePointQ]:
    """All primitive triples with a, b > 0 and c <= cmax, sorted."""
    if cmax < 1:
        raise ValueError("cmax must be >= 1")
    seeds = [r for r in ROOTS if r.c <= cmax]
    if jobs <= 1 or not seeds:
        found = [t for r in seeds for t in _subtree((r, cmax))]
    else:
        # split one level down so the pool has some work to share
        tops = list(seeds)
        work = [c for r in seeds for c in berggren_children(r)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            found = tops + [t for part in ex.map(_subtree, [(w, cmax) for w in work]) for t in part]
    return sorted(found, key=lambda t: (t.c, t.a))


# ---------------------------------------------------------------------------
# projections


def stereo_triple(p: int, q: int) -> CirclePointQ:
    """phi(p/q) as a primitive triple; halved when p + q is even."""
    if q == 0:
        return CirclePointQ(0, 1, 1)
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    a, b, c = 2 * p * q, p * p - q * q, p * p + q * q
    if (p + q) % 2 == 0:
        a, b, c = a // 2, b // 2, c // 2
    return CirclePointQ(a, b, c)


def stereo(t):
    """phi(t) = (2t/(t^2+1), (t^2-1)/(t^2+1)); a triple for rational t, else an exact pair."""
    if t is INF:
        return CirclePointQ(0, 1, 1)
    if isinstance(t, (int, Fraction)):
        t = Fraction(t)
        return stereo_triple(t.numerator, t.denominator)
    if isinstance(t, QSqrt2) and t.is_rational:
        return stereo(t.a)
    d = (t * t + 1).inverse()
    return 2 * t * d, (t * t - 1) * d


def mod_proj(pt):
    """(alpha/(1-beta) - 1)/sqrt2, with INF at beta = 1."""
    if isinstance(pt, CirclePointQ):
        if pt.b == pt.c:
            return INF
        return (QSqrt2(Fraction(pt.a, pt.c - pt.b)) - 1) * SQRT2 / 2
    alpha, beta = (_lift(x) for x in pt)
    one_minus = 1 - beta
    if sign(one_minus) == 0:
        return INF
    return (alpha * one_minus.inverse() - 1) * SQRT2 / 2


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction)) or (isinstance(v, QSqrt2) and v.is_rational)


def _mp(v, dps: int):
    if isinstance(v, (int, Fraction)):
        v = Fraction(v)
        return mpmath.mpf(v.numerator) / v.denominator
    iv = to_interval(v, Fraction(1, 10 ** (dps + 10)))
    m = iv.mid()
    return mpmath.mpf(m.numerator) / m.denominator


# ---------------------------------------------------------------------------
# Diophantine scans


@dataclass(frozen=True)
class ApproxEstimate:
    """Largest reciprocal quality found in the scan window; a finite-scan estimate of the limsup."""

    value: object  # mpmath.mpf, or None when unbounded
    witness: tuple
    window: tuple
    candidates: int
    unbounded: bool = False


def _cf_candidates(x, qmax: int):
    """Convergents and intermediate fractions of x with denominator <= qmax."""
    p0, q0, p1, q1 = 1, 0, math.floor(x), 1
    out = [(p1, q1)]
    r = x - p1
    while q1 <= qmax and r != 0:
        r = 1 / r
        a = math.floor(r)
        r -= a
        for j in range(1, a + 1):
            p, q = p0 + j * p1, q0 + j * q1
            if q > qmax:
                break
            out.append((p, q))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    return out


def lagrange_estimate(t, qmax: int, q_min: int | None = None, sweep: int = 2000) -> ApproxEstimate:
    """max of 1/(Ht(p/q)|t - p/q|) over q_min <= q <= qmax.

    Candidates are the convergents and intermediate fractions of t (which
    contain every p/q with q^2|t - p/q| < 1) plus all p/q adjacent to t for
    q_min <= q <= min(qmax, sweep).  q_min defaults to isqrt(qmax) so that
    small denominators do not dominate the limsup.
    """
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    if _is_rational(t):
        return ApproxEstimate(None, (), (0, qmax), 0, unbounded=True)
    q_min = max(1, math.isqrt(qmax)) if q_min is None else q_min
    dps = 40 + 2 * len(str(qmax))
    with mpmath.workdps(dps):
        x = _mp(t, dps)
        cands = set()
        for p, q in _cf_candidates(x, qmax):
            g = math.gcd(p, q)
            cands.add((p // g, q // g))
        for q in range(q_min, min(qmax, sweep) + 1):
            f = int(mpmath.floor(x * q))
            for p in (f, f + 1):
                if math.gcd(p, q) == 1:
                    cands.add((p, q))
        best, arg, n = None, (), 0
        for p, q in cands:
            if not q_min <= q <= qmax:
                continue
            n += 1
            h = HeightedRational(p, q).height
            v = 1 / (mpmath.mpf(h.numerator) / h.denominator * abs(x - mpmath.mpf(p) / q))
            if best is None or v > best:
                best, arg = v, (p, q)
    return ApproxEstimate(best, arg, (q_min, qmax), n)


def _branch_matrix(d: int):
    return _BRANCH[d]


def circle_lagrange_estimate(pt, hmax: int, c_min: int | None = None, sweep: int = 2000) -> ApproxEstimate:
    """max of 1/(c * |pt - (a/c, b/c)|) over Pythagorean points with c_min <= c <= hmax.

    Candidates are the endpoints of the Romik cylinders containing pt (the
    Berggren tree walked along the digits of pt) plus every tree triple with
    c <= min(hmax, sweep).  The point is first folded into the first quadrant,
    which preserves heights and distances.
    """
    if hmax < 1:
        raise ValueError("hmax must be >= 1")
    if isinstance(pt, CirclePointQ):
        return ApproxEstimate(None, pt.as_tuple(), (0, hmax), 0, unbounded=True)
    alpha, beta = pt
    if _is_rational(alpha) and _is_rational(beta):
        return ApproxEstimate(None, (), (0, hmax), 0, unbounded=True)
    alpha = -alpha if sign(alpha) < 0 else alpha
    beta = -beta if sign(beta) < 0 else beta
    c_min = max(1, math.isqrt(hmax)) if c_min is None else c_min
    dps = 40 + 2 * len(str(hmax))
    cands = {t.as_tuple() for t in FIXED}
    v = mod_proj((alpha, beta))
    mat = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(100_000):
        ends = [_apply(mat, e.as_tuple()) for e in FIXED]
        cands.update(ends)
        if min(e[2] for e in ends) > hmax or v is INF or sign(v) == 0:
            break
        d = _digit_of(v)
        v = digit_matrix(d).inverse().apply(v)
        mat = _matmul(mat, _branch_matrix(d))
    cands.update(t.as_tuple() for t in pythagoras_tree(min(hmax, sweep)))
    with mpmath.workdps(dps):
        x, y = _mp(alpha, dps), _mp(beta, dps)
        best, arg, n = None, (), 0
        for a, b, c in cands:
            if not c_min <= c <= hmax:
                continue
            n += 1
            dist = mpmath.sqrt((x - mpmath.mpf(a) / c) ** 2 + (y - mpmath.mpf(b) / c) ** 2)
            val = 1 / (c * dist)
            if best is None or val > best:
                best, arg = val, (a, b, c)
    return ApproxEstimate(best, arg, (c_min, hmax), n)


# ---------------------------------------------------------------------------
# even integer continued fractions


def even_cf(word, n_terms: int = 20) -> list[tuple[int, int | None]]:
    """First n_terms pairs (a_i, e_i) of the even continued fraction of alpha/(1-beta).

    With k_0 = 0 and k_1 < k_2 < ... the (1-based) positions of the digits
    other than 3, a_i = k_{i+1} - k_i and e_i = -1 or +1 as digit k_i is 1 or 2;
    e_0 is None.  The value is 2a_0 + e_1/(2a_1 + e_2/(2a_2 + ...)).
    """
    if isinstance(word, str):
        word = EvPeriodicWord.parse(word)
    if all(d == 3 for d in word.cycle):
        raise ValueError("word ends in 3s: the even continued fraction terminates at infinity")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    positions = [0]
    i = 0
    while len(positions) <= n_terms:
        if word.digit(i) != 3:
            positions.append(i + 1)
        i += 1
    out: list[tuple[int, int | None]] = []
    for j in range(n_terms):
        eps = None if j == 0 else (-1 if word.digit(positions[j] - 1) == 1 else 1)
        out.append((positions[j + 1] - positions[j], eps))
    return out


def even_cf_value(terms: list[tuple[int, int | None]]) -> Fraction:
    """Exact value of the truncated even continued fraction."""
    if not terms:
        raise ValueError("no terms")
    acc = Fraction(2 * terms[-1][0])
    for (a, _), (_, e_next) in zip(reversed(terms[:-1]), reversed(terms[1:])):
        acc = 2 * a + Fraction(e_next) / acc
    return acc

