"""Exact arithmetic in Q(sqrt2) and its quadratic extensions.

Every spectral value handled by the package is an element of some field
Q(sqrt2)(sqrt D).  ``QSqrt2`` is the base field, ``QuadExt`` a single
quadratic extension, ``AlgSum`` a formal sum of numbers living in
incompatible extensions (only comparable through certified intervals).
``Mobius`` is a 2x2 matrix over Q(sqrt2) acting on the projective line.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

__all__ = [
    "QSqrt2",
    "QuadExt",
    "AlgSum",
    "Infinity",
    "INF",
    "Mobius",
    "DyadicInterval",
    "SQRT2",
    "quad",
    "sqrt",
    "sign",
    "compare",
    "to_interval",
    "to_decimal",
    "sqrt_in_qsqrt2",
    "minimal_polynomial",
    "certified_equal",
    "to_json",
    "from_json",
    "NoFixedPointError",
]


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    s = math.isqrt(n)
    return s if s * s == n else None


def _rat_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p = _isqrt_exact(x.numerator)
    q = _isqrt_exact(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def _sgn(n) -> int:
    return (n > 0) - (n < 0)


# ---------------------------------------------------------------------------
# Q(sqrt 2)


@total_ordering
class QSqrt2:
    """The number (p + q*sqrt2)/r, stored in lowest terms with r > 0."""

    __slots__ = ("_p", "_q", "_r", "_hash")

    def __init__(self, a=0, b=0):
        a = Fraction(a)
        b = Fraction(b)
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r)

    def _set(self, p: int, q: int, r: int) -> None:
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p //= g
            q //= g
            r //= g
        self._p, self._q, self._r = p, q, r
        self._hash = None

    @classmethod
    def _raw(cls, p: int, q: int, r: int) -> QSqrt2:
        obj = cls.__new__(cls)
        obj._set(p, q, r)
        return obj

    @property
    def a(self) -> Fraction:
        return Fraction(self._p, self._r)

    @property
    def b(self) -> Fraction:
        return Fraction(self._q, self._r)

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    def __repr__(self) -> str:
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        if b == 1:
            tail = "√2"
        elif b == -1:
            tail = "-√2"
        else:
            tail = f"{b}√2" if b.denominator == 1 else f"({b})√2"
        if a == 0:
            return tail
        return f"{a}{'+' if b > 0 else ''}{tail}"

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._p, self._q, self._r))
        return self._hash

    def key(self) -> tuple[int, int, int]:
        return (self._p, self._q, self._r)

    def __eq__(self, other) -> bool:
        other = _lift(other)
        if isinstance(other, QSqrt2):
            return self._p == other._p and self._q == other._q and self._r == other._r
        if other is NotImplemented:
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    def sign(self) -> int:
        p, q = self._p, self._q
        sp, sq = _sgn(p), _sgn(q)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        return sp * _sgn(p * p - 2 * q * q)

    def conjugate(self) -> QSqrt2:
        return QSqrt2._raw(self._p, -self._q, self._r)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - 2 * self._q * self._q, self._r * self._r)

    def __neg__(self) -> QSqrt2:
        return QSqrt2._raw(-self._p, -self._q, self._r)

    def __pos__(self) -> QSqrt2:
        return self

    def __abs__(self) -> QSqrt2:
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            r1, r2 = self._r, o._r
            if r1 == r2:
                return QSqrt2._raw(self._p + o._p, self._q + o._q, r1)
            return QSqrt2._raw(self._p * r2 + o._p * r1, self._q * r2 + o._q * r1, r1 * r2)
        if o is NotImplemented:
            return NotImplemented
        return o + self

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            p1, q1, p2, q2 = self._p, self._q, o._p, o._q
            return QSqrt2._raw(p1 * p2 + 2 * q1 * q2, p1 * q2 + q1 * p2, self._r * o._r)
        if o is NotImplemented:
            return NotImplemented
        return o * self

    __rmul__ = __mul__

    def inverse(self) -> QSqrt2:
        n = self._p * self._p - 2 * self._q * self._q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return QSqrt2._raw(self._r * self._p, -self._r * self._q, n)

    def __truediv__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            return self * o.inverse()
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return _lift(other) * self.inverse()

    def __pow__(self, n: int) -> QSqrt2:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def to_interval(self, eps) -> DyadicInterval:
        return to_interval(self, eps)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(2)


ZERO = QSqrt2._raw(0, 0, 1)
ONE = QSqrt2._raw(1, 0, 1)
SQRT2 = QSqrt2._raw(0, 1, 1)


def _lift(x):
    if isinstance(x, (QSqrt2, QuadExt, AlgSum, Infinity)):
        return x
    if isinstance(x, int):
        return QSqrt2._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return QSqrt2._raw(x.numerator, 0, x.denominator)
    return NotImplemented


def sqrt_in_qsqrt2(v: QSqrt2) -> QSqrt2 | None:
    """Nonnegative square root of v inside Q(sqrt2), or None if v is not a square."""
    v = _lift(v)
    s = v.sign()
    if s < 0:
        return None
    if s == 0:
        return ZERO
    a, b = v.a, v.b
    if b == 0:
        r = _rat_sqrt(a)
        if r is not None:
            return QSqrt2(r)
        r = _rat_sqrt(a / 2)
        if r is not None:
            return QSqrt2(0, r)
        return None
    n = _rat_sqrt(a * a - 2 * b * b)
    if n is None:
        return None
    for u2 in ((a + n) / 2, (a - n) / 2):
        u = _rat_sqrt(u2)
        if u:
            w = b / (2 * u)
            root = QSqrt2(u, w)
            if root * root == v:
                return root if root.sign() > 0 else -root
    return None


# ---------------------------------------------------------------------------
# quadratic extensions


def _square_part(n: int) -> int:
    """Largest s with s^2 | n (trial division; n is small in practice)."""
    n = abs(n)
    s = 1
    f = 2
    while f * f <= n and f < 100000:
        if n % (f * f) == 0:
            n //= f * f
            s *= f
            continue
        if n % f == 0:
            n //= f
        f += 1 if f == 2 else 2
    r = _isqrt_exact(n)
    if r is not None and r > 1:
        s *= r
    return s


@lru_cache(maxsize=65536)
def _normalize_delta(p: int, q: int, r: int) -> tuple[QSqrt2, QSqrt2 | None, Fraction]:
    """Reduce delta = (p+q√2)/r.

    Returns (delta', root, scale) with sqrt(delta) = scale*sqrt(delta'); when
    delta is a square in Q(sqrt2) root is its square root and delta' is unused.
    """
    d = QSqrt2._raw(p, q, r)
    root = sqrt_in_qsqrt2(d)
    if root is not None:
        return d, root, Fraction(1)
    # sqrt((p+q√2)/r) = sqrt(r(p+q√2))/r
    P, Q = p * r, q * r
    s = _square_part(math.gcd(P, Q))
    return QSqrt2._raw(P // (s * s), Q // (s * s), 1), None, Fraction(s, r)


@lru_cache(maxsize=65536)
def _coerce_factor(d_from: tuple, d_to: tuple) -> QSqrt2 | None:
    """t > 0 with sqrt(d_from) = t*sqrt(d_to), if it exists in Q(sqrt2)."""
    ratio = QSqrt2._raw(*d_from) / QSqrt2._raw(*d_to)
    return sqrt_in_qsqrt2(ratio)


def quad(x, y, delta) -> Union[QSqrt2, QuadExt]:
    """Build x + y*sqrt(delta), collapsing to QSqrt2 whenever possible."""
    x, y, delta = _lift(x), _lift(y), _lift(delta)
    if not y:
        return x
    if delta.sign() <= 0:
        if delta.sign() == 0:
            return x
        raise ValueError("negative radicand")
    dn, root, scale = _normalize_delta(*delta.key())
    if root is not None:
        return x + y * root
    return QuadExt._raw(x, y * scale, dn)


def sqrt(v) -> Union[QSqrt2, QuadExt]:
    v = _lift(v)
    if not isinstance(v, QSqrt2):
        raise TypeError("sqrt is only defined on Q(sqrt2)")
    if v.sign() < 0:
        raise ValueError("square root of a negative number")
    return quad(ZERO, ONE, v)


class QuadExt:
    """x + y*sqrt(delta) with x, y, delta in Q(sqrt2), y != 0 and delta not a square."""

    __slots__ = ("x", "y", "delta", "_hash")

    def __init__(self, delta, x, y):
        v = quad(x, y, delta)
        if not isinstance(v, QuadExt):
            raise ValueError("value lies in Q(sqrt2); use quad() instead")
        self.x, self.y, self.delta = v.x, v.y, v.delta
        self._hash = None

    @classmethod
    def _raw(cls, x: QSqrt2, y: QSqrt2, delta: QSqrt2) -> QuadExt:
        obj = cls.__new__(cls)
        obj.x, obj.y, obj.delta = x, y, delta
        obj._hash = None
        return obj

    def __repr__(self) -> str:
        return f"QuadExt(delta={self.delta}, x={self.x}, y={self.y})"

    def __str__(self) -> str:
        rad = f"√({self.delta})" if not self.delta.is_rational else f"√{self.delta}"
        y = self.y
        if y == 1:
            ypart = rad
        elif y == -1:
            ypart = "-" + rad
        else:
            ypart = f"({y}){rad}"
        if not self.x:
            return ypart
        sep = "" if ypart.startswith("-") else "+"
        return f"{self.x}{sep}{ypart}"

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.x, self.y, self.delta))
        return self._hash

    def field_key(self) -> tuple:
        return self.delta.key()

    def _align(self, other: QuadExt) -> QuadExt | None:
        if other.delta == self.delta:
            return other
        t = _coerce_factor(other.delta.key(), self.delta.key())
        if t is None:
            return None
        return QuadExt._raw(other.x, other.y * t, self.delta)

    def __eq__(self, other) -> bool:
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        if isinstance(o, QuadExt):
            a = self._align(o)
            if a is not None:
                return self.x == a.x and self.y == a.y
            return False
        if isinstance(o, QSqrt2):
            return False
        return compare(self, o) == 0

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    def __bool__(self) -> bool:
        return True

    def sign(self) -> int:
        sx, sy = self.x.sign(), self.y.sign()
        if sx == 0 or sx == sy:
            return sy
        return sx * (self.x * self.x - self.y * self.y * self.delta).sign()

    def conjugate(self) -> QuadExt:
        return QuadExt._raw(self.x, -self.y, self.delta)

    def norm(self) -> QSqrt2:
        return self.x * self.x - self.y * self.y * self.delta

    def __neg__(self) -> QuadExt:
        return QuadExt._raw(-self.x, -self.y, self.delta)

    def __pos__(self) -> QuadExt:
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __add__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            return QuadExt._raw(self.x + o, self.y, self.delta)
        if isinstance(o, QuadExt):
            a = self._align(o)
            if a is None:
                return AlgSum([self, o])
            return quad(self.x + a.x, self.y + a.y, self.delta)
        if o is NotImplemented:
            return NotImplemented
        return o + self

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            if not o:
                return ZERO
            return QuadExt._raw(self.x * o, self.y * o, self.delta)
        if isinstance(o, QuadExt):
            a = self._align(o)
            if a is None:
                raise ValueError("product of numbers from different quadratic extensions")
            return quad(
                self.x * a.x + self.y * a.y * self.delta,
                self.x * a.y + self.y * a.x,
                self.delta,
            )
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        return QuadExt._raw(self.x / n, -self.y / n, self.delta)

    def __truediv__(self, other):
        o = _lift(other)
        if isinstance(o, QSqrt2):
            return self * o.inverse()
        if isinstance(o, QuadExt):
            return self * o.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return _lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def to_interval(self, eps) -> DyadicInterval:
        return to_interval(self, eps)

    def __float__(self) -> float:
        return float(to_interval(self, Fraction(1, 10**20)).mid())


class AlgSum:
    """Sum of numbers from pairwise incompatible quadratic extensions.

    Such a sum is never zero unless all terms are (square roots of distinct
    square classes are linearly independent), so comparisons terminate.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        base = ZERO
        exts: list[QuadExt] = []
        for t in terms:
            t = _lift(t)
            if isinstance(t, AlgSum):
                pieces = t.terms
            else:
                pieces = (t,)
            for piece in pieces:
                if isinstance(piece, QSqrt2):
                    base = base + piece
                    continue
                for i, e in enumerate(exts):
                    a = e._align(piece)
                    if a is not None:
                        merged = e + a
                        if isinstance(merged, QSqrt2):
                            base = base + merged
                            exts.pop(i)
                        else:
                            exts[i] = merged
                        break
                else:
                    exts.append(piece)
        self.terms = tuple([base] + exts) if base else tuple(exts)

    def simplify(self):
        if len(self.terms) == 0:
            return ZERO
        if len(self.terms) == 1:
            return self.terms[0]
        if len(self.terms) == 2 and isinstance(self.terms[0], QSqrt2):
            return self.terms[0] + self.terms[1]
        return self

    def __repr__(self) -> str:
        return "AlgSum(" + " + ".join(str(t) for t in self.terms) + ")"

    __str__ = __repr__

    def __neg__(self):
        return AlgSum([-t for t in self.terms]).simplify()

    def __add__(self, other):
        o = _lift(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgSum([self, o]).simplify()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def sign(self) -> int:
        return sign(self)

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __eq__(self, other) -> bool:
        return compare(self, other) == 0

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    __hash__ = None

    def to_interval(self, eps) -> DyadicInterval:
        return to_interval(self, eps)

    def __float__(self) -> float:
        return float(to_interval(self, Fraction(1, 10**20)).mid())


class Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "∞"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self) -> int:
        return hash("hecke4.INF")

    def __eq__(self, other) -> bool:
        return other is self

    def __neg__(self):
        return self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def sign(self) -> int:
        return 1

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __le__(self, other) -> bool:
        return other is self


INF = Infinity()

Number = Union[QSqrt2, QuadExt, AlgSum]


def sign(v) -> int:
    v = _lift(v)
    if isinstance(v, (QSqrt2, QuadExt, Infinity)):
        return v.sign()
    terms = v.terms
    if len(terms) == 1:
        return terms[0].sign()
    eps = Fraction(1, 2**40)
    while True:
        iv = to_interval(v, eps)
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        if iv.lo == iv.hi == 0:
            return 0
        eps = eps * eps


def compare(u, v) -> int:
    """Exact three-way comparison; infinity is larger than every finite value."""
    u, v = _lift(u), _lift(v)
    if u is INF or v is INF:
        if u is v:
            return 0
        return 1 if u is INF else -1
    return sign(u - v)


# ---------------------------------------------------------------------------
# validated enclosures


class DyadicInterval:
    """Closed interval [lo, hi] with rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    def __repr__(self) -> str:
        return f"DyadicInterval({float(self.lo)!r}, {float(self.hi)!r})"

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, DyadicInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, (int, Fraction)):
            return self.lo <= x <= self.hi
        x = _lift(x)
        return compare(x, self.lo) >= 0 and compare(x, self.hi) <= 0

    def overlaps(self, other: DyadicInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: DyadicInterval) -> DyadicInterval:
        return DyadicInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other):
        o = _as_interval(other)
        return DyadicInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        o = _as_interval(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return DyadicInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def inverse(self) -> DyadicInterval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return DyadicInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_interval(other).inverse()

    def __rtruediv__(self, other):
        return _as_interval(other) * self.inverse()

    def rounded(self, bits: int) -> DyadicInterval:
        """Outward rounding to denominators 2**bits."""
        s = 1 << bits
        return DyadicInterval(
            Fraction(math.floor(self.lo * s), s), Fraction(math.ceil(self.hi * s), s)
        )


def _as_interval(x) -> DyadicInterval:
    if isinstance(x, DyadicInterval):
        return x
    if isinstance(x, (int, Fraction)):
        return DyadicInterval(x, x)
    raise TypeError(f"cannot use {type(x).__name__} as an interval")


def _sqrt_enclosure(lo: Fraction, hi: Fraction, bits: int) -> DyadicInterval:
    s = 1 << bits
    s2 = s * s
    a = math.isqrt(math.floor(lo * s2)) if lo > 0 else 0
    top = math.ceil(hi * s2)
    b = math.isqrt(top)
    if b * b < top:
        b += 1
    return DyadicInterval(Fraction(a, s), Fraction(b, s))


def _enclose(v, bits: int) -> DyadicInterval:
    if isinstance(v, QSqrt2):
        if v._q == 0:
            return DyadicInterval(v.a)
        r2 = _sqrt_enclosure(Fraction(2), Fraction(2), bits)
        return (DyadicInterval(v.a) + r2 * v.b).rounded(bits + 4)
    if isinstance(v, QuadExt):
        d = _enclose(v.delta, bits + 8)
        root = _sqrt_enclosure(d.lo, d.hi, bits + 4)
        return (_enclose(v.x, bits) + _enclose(v.y, bits) * root).rounded(bits + 4)
    if isinstance(v, AlgSum):
        acc = DyadicInterval(0)
        for t in v.terms:
            acc = acc + _enclose(t, bits + 2)
        return acc
    raise TypeError(f"cannot enclose {v!r}")


def to_interval(v, eps) -> DyadicInterval:
    """Enclosure of width <= eps of a finite exact value."""
    v = _lift(v)
    if v is INF:
        raise ValueError("cannot enclose infinity")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(v, QSqrt2) and v._q == 0:
        return DyadicInterval(v.a)
    bits = max(8, -math.floor(math.log2(eps)) + 8)
    while True:
        iv = _enclose(v, bits)
        if iv.width() <= eps:
            return iv
        bits += max(8, bits // 2)


def to_decimal(v, digits: int = 20) -> str:
    """Correctly rounded decimal rendering with ``digits`` places after the point."""
    v = _lift(v)
    if v is INF:
        return "inf"
    scale = 10**digits
    if isinstance(v, QSqrt2) and v.is_rational:
        n = v.a * scale
        q = math.floor(n + Fraction(1, 2))
        return _fmt_scaled(q, digits)
    eps = Fraction(1, scale * 100)
    for _ in range(64):
        iv = to_interval(v, eps)
        lo = math.floor(iv.lo * scale + Fraction(1, 2))
        hi = math.floor(iv.hi * scale + Fraction(1, 2))
        if lo == hi:
            return _fmt_scaled(lo, digits)
        eps /= 2**32
    return _fmt_scaled(lo, digits)


def _fmt_scaled(q: int, digits: int) -> str:
    neg = q < 0
    q = abs(q)
    s = str(q).rjust(digits + 1, "0")
    body = s[:-digits] + "." + s[-digits:] if digits else s
    return ("-" if neg else "") + body


# ---------------------------------------------------------------------------
# Möbius transformations


class NoFixedPointError(ValueError):
    pass


class Mobius:
    """2x2 matrix over Q(sqrt2) acting by v -> (a v + b)/(c v + d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = _lift(a), _lift(b), _lift(c), _lift(d)

    def __repr__(self) -> str:
        return f"Mobius({self.a}, {self.b}; {self.c}, {self.d})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Mobius) and self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> QSqrt2:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QSqrt2:
        return self.a + self.d

    def __matmul__(self, other: Mobius) -> Mobius:
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> Mobius:
        k = self.det().inverse()
        return Mobius(self.d * k, -self.b * k, -self.c * k, self.a * k)

    def transpose(self) -> Mobius:
        return Mobius(self.a, self.c, self.b, self.d)

    def __call__(self, v):
        return self.apply(v)

    def apply(self, v):
        if v is INF:
            if not self.c:
                return INF
            return self.a / self.c
        v = _lift(v)
        den = self.c * v + self.d
        if not den or (isinstance(den, QSqrt2) and den.sign() == 0):
            return INF
        return (self.a * v + self.b) / den

    def derivative(self, v):
        den = self.c * _lift(v) + self.d
        return self.det() / (den * den)

    def attracting_fixed_point(self):
        """Limit of M^n x for generic x; the unique fixed point if parabolic."""
        a, b, c, d = self.entries()
        tr, det = self.trace(), self.det()
        disc = tr * tr - 4 * det
        s = disc.sign()
        if s < 0 or (det.sign() < 0 and not tr):
            raise NoFixedPointError("no attracting fixed point")
        if not c:
            # v -> (a v + b)/d
            if a == d:
                if not b:
                    raise NoFixedPointError("identity has no attracting fixed point")
                return INF
            if abs(a / d) < 1:
                return b / (d - a)
            return INF
        if s == 0:
            return (a - d) / (2 * c)
        branch = ONE if tr.sign() > 0 else -ONE
        return quad((a - d) / (2 * c), branch / (2 * c), disc)


def attracting_fixed_point(m: Mobius):
    return m.attracting_fixed_point()


def mobius_apply(m: Mobius, v):
    return m.apply(v)


# ---------------------------------------------------------------------------
# minimal polynomials and certified equality


def _defining_poly(v):
    """Integer polynomial (sympy Poly in x) vanishing at v."""
    import sympy

    x = sympy.Symbol("x")
    s2 = sympy.sqrt(2)

    def sym(q: QSqrt2):
        return sympy.Rational(q.a.numerator, q.a.denominator) + sympy.Rational(
            q.b.numerator, q.b.denominator
        ) * s2

    if isinstance(v, QSqrt2):
        g = x - sym(v)
        expr = g * (x - sym(v.conjugate()))
    elif isinstance(v, QuadExt):
        B = -2 * v.x
        C = v.x * v.x - v.y * v.y * v.delta
        expr = (x**2 + sym(B) * x + sym(C)) * (
            x**2 + sym(B.conjugate()) * x + sym(C.conjugate())
        )
    else:
        raise TypeError("minimal polynomials are computed for QSqrt2 and QuadExt only")
    return sympy.Poly(sympy.expand(expr), x, domain="QQ")


def minimal_polynomial(v) -> list[int]:
    """Coefficients (leading first) of the primitive integer minimal polynomial."""
    import sympy

    v = _lift(v)
    poly = _defining_poly(v)
    _, factors = poly.factor_list()
    enc = to_interval(v, Fraction(1, 10**40))
    candidates = []
    for f, _mult in factors:
        if f.degree() == 0:
            continue
        for (lo, hi), _k in f.intervals(eps=sympy.Rational(1, 10**45)):
            if Fraction(str(lo)) <= enc.hi and enc.lo <= Fraction(str(hi)):
                candidates.append(f)
                break
    if len(candidates) != 1:
        raise ArithmeticError("could not isolate the minimal polynomial")
    f = candidates[0]
    coeffs = [sympy.Rational(c) for c in f.all_coeffs()]
    den = sympy.ilcm(*[c.q for c in coeffs])
    ints = [int(c * den) for c in coeffs]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    if ints[0] < 0:
        ints = [-c for c in ints]
    return ints


def certified_equal(u, v) -> bool:
    """Decide u == v through minimal polynomials and root isolation."""
    import sympy

    u, v = _lift(u), _lift(v)
    if isinstance(u, AlgSum) or isinstance(v, AlgSum):
        return sign(u - v) == 0
    pu, pv = minimal_polynomial(u), minimal_polynomial(v)
    if pu != pv:
        return False
    x = sympy.Symbol("x")
    poly = sympy.Poly(pu, x)
    roots = poly.intervals(eps=sympy.Rational(1, 10**50))
    iu = to_interval(u, Fraction(1, 10**55))
    iv = to_interval(v, Fraction(1, 10**55))
    for (lo, hi), _ in roots:
        lo, hi = Fraction(str(lo)), Fraction(str(hi))
        inu = lo <= iu.lo and iu.hi <= hi
        inv = lo <= iv.lo and iv.hi <= hi
        if inu or inv:
            return inu and inv
    return False


# ---------------------------------------------------------------------------
# serialization


def _q_json(q: QSqrt2) -> dict:
    return {"a": str(q.a), "b": str(q.b)}


def _q_from(d: dict) -> QSqrt2:
    return QSqrt2(Fraction(d["a"]), Fraction(d["b"]))


def to_json(v) -> dict:
    v = _lift(v)
    if v is INF:
        return {"type": "infinity"}
    if isinstance(v, QSqrt2):
        return {"type": "qsqrt2", "delta": _q_json(ONE), "x": _q_json(v), "y": _q_json(ZERO)}
    if isinstance(v, QuadExt):
        return {"type": "quadext", "delta": _q_json(v.delta), "x": _q_json(v.x), "y": _q_json(v.y)}
    if isinstance(v, AlgSum):
        return {"type": "sum", "terms": [to_json(t) for t in v.terms]}
    raise TypeError(f"cannot serialize {v!r}")


def from_json(d: dict):
    kind = d["type"]
    if kind == "infinity":
        return INF
    if kind == "qsqrt2":
        return _q_from(d["x"])
    if kind == "quadext":
        return quad(_q_from(d["x"]), _q_from(d["y"]), _q_from(d["delta"]))
    if kind == "sum":
        return AlgSum([from_json(t) for t in d["terms"]]).simplify()
    raise ValueError(f"unknown number type {kind!r}")
