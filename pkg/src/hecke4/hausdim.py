"""A certified positive lower bound for the Hausdorff dimension of the Lagrange spectrum near 2*sqrt2."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .qfield import SQRT2, DyadicInterval, Mobius, QSqrt2, compare, to_interval
from .romik import EvPeriodicWord, Word, eval_word, word_matrix

__all__ = [
    "block_a",
    "block_b",
    "ebound_quantity",
    "choose_m",
    "closed_form_matrix",
    "IfsSpec",
    "ifs_build",
    "dim_lower_bound",
    "moment_residual",
    "parse_e_prefix",
    "t_p_check",
    "power_order_check",
]


def block_a(m: int) -> Word:
    return (3,) + (2,) * (2 * m + 2) + (1,)


def block_b(m: int) -> Word:
    return (3,) + (2,) * (2 * m) + (1,)


def ebound_quantity(m: int):
    """[(A)^inf] + 1/[(B)^inf], which tends to 2*sqrt2 from above as m grows."""
    a = eval_word(EvPeriodicWord((), block_a(m)))
    b = eval_word(EvPeriodicWord((), block_b(m)))
    return a + b.inverse()


def choose_m(eps, m_max: int = 10_000) -> int:
    """Smallest m >= 0 with ebound_quantity(m) < 2*sqrt2 + eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    target = 2 * SQRT2 + eps
    for m in range(m_max + 1):
        if compare(ebound_quantity(m), target) < 0:
            return m
    raise ArithmeticError("no m found; eps too small")


def closed_form_matrix(k: int) -> Mobius:
    """N_3 N_2^k N_1 written with powers of 1 +- sqrt2 (k even)."""
    phi = QSqrt2(1, 1)
    psi = QSqrt2(1, -1)
    half = QSqrt2(Fraction(1, 2))
    return Mobius(
        half * (phi ** (k + 2) + psi ** (k + 2)),
        half * (phi ** (k + 1) - psi ** (k + 1)),
        half * (phi ** (k + 1) - psi ** (k + 1)),
        half * (phi**k + psi**k),
    )


@dataclass(frozen=True)
class IfsSpec:
    m: int
    mat_a: Mobius
    mat_b: Mobius
    alpha: object
    beta: object
    maps: tuple
    contractions: tuple  # exact lower bounds of |f_i'| on [alpha, beta]


def ifs_build(m: int) -> IfsSpec:
    if m < 0:
        raise ValueError("m must be >= 0")
    a, b = block_a(m), block_b(m)
    na, nb = word_matrix(a), word_matrix(b)
    assert na == closed_form_matrix(2 * m + 2), "closed form for N_A disagrees with the product"
    assert nb == closed_form_matrix(2 * m), "closed form for N_B disagrees with the product"
    alpha = eval_word(EvPeriodicWord((), b + b + a))
    beta = eval_word(EvPeriodicWord((), b + a + a))
    if compare(alpha, beta) >= 0:
        raise ArithmeticError("expected alpha < beta")
    maps = (nb @ nb @ na, nb @ nb @ na @ na, nb @ na, nb @ na @ na)
    cs = []
    for f in maps:
        if f.det() != 1:
            raise ArithmeticError("IFS map with determinant != 1")
        # increasing map: image of [alpha, beta] is [f(alpha), f(beta)]
        if compare(f.apply(alpha), alpha) < 0 or compare(f.apply(beta), beta) > 0:
            raise ArithmeticError("IFS map does not preserve [alpha, beta]")
        den = f.c * beta + f.d
        cs.append((den * den).inverse())
    return IfsSpec(m, na, nb, alpha, beta, maps, tuple(cs))


def _iv(x, prec_bits: int):
    enc = to_interval(x, Fraction(1, 2 ** (prec_bits + 8)))
    return mpmath.iv.mpf([mpmath.mpf(enc.lo.numerator) / enc.lo.denominator, mpmath.mpf(enc.hi.numerator) / enc.hi.denominator])


def _moment(cs, s):
    return sum((mpmath.iv.exp(s * mpmath.iv.log(c)) for c in cs), mpmath.iv.mpf(0)) - 1


def dim_lower_bound(eps, tol=Fraction(1, 10**6), prec_bits: int = 160):
    """Enclosure [s_lo, s_hi] of the root of sum c_i^s = 1; returns (enclosure, spec)."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    spec = ifs_build(choose_m(eps))
    with mpmath.workprec(prec_bits):
        cs = [_iv(c, prec_bits) for c in spec.contractions]
        lo, hi = Fraction(0), Fraction(1)
        if not _moment(cs, mpmath.iv.mpf(1)).b < 0:
            raise ArithmeticError("sum of contraction bounds is not < 1 at s = 1")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            g = _moment(cs, mpmath.iv.mpf(mpmath.mpf(mid.numerator) / mid.denominator))
            if g.a > 0:
                lo = mid
            elif g.b < 0:
                hi = mid
            else:
                break
    if lo <= 0:
        raise ArithmeticError("could not certify s > 0")
    return DyadicInterval(lo, hi), spec


def moment_residual(spec: IfsSpec, s: Fraction, prec_bits: int = 160) -> float:
    with mpmath.workprec(prec_bits):
        cs = [_iv(c, prec_bits) for c in spec.contractions]
        g = _moment(cs, mpmath.iv.mpf(mpmath.mpf(s.numerator) / s.denominator))
        return float(max(abs(g.a), abs(g.b)))


# ---------------------------------------------------------------------------
# the words T_P


def parse_e_prefix(text: str) -> list[tuple[str, int]]:
    """Split a word over {A, B} into runs, checking it alternates B/A with runs of 1 or 2."""
    text = text.strip().upper()
    if not text or not re.fullmatch(r"[AB]+", text):
        raise ValueError("E-prefix must be a nonempty word over {A, B}")
    runs = [(m.group(0)[0], len(m.group(0))) for m in re.finditer(r"A+|B+", text)]
    if runs[0][0] != "B":
        raise ValueError("E-prefix must start with B")
    if any(n > 2 for _, n in runs):
        raise ValueError("runs in an E-prefix have length 1 or 2")
    if runs[-1][0] != "A":
        raise ValueError("E-prefix must end with a run of A (whole B^m A^n pairs)")
    return runs


def _expand(runs, m: int) -> Word:
    blocks = {"A": block_a(m), "B": block_b(m)}
    return tuple(d for letter, n in runs for _ in range(n) for d in blocks[letter])


def _cylinder(digits: Word, eps=Fraction(1, 10**40)) -> DyadicInterval:
    mat = word_matrix(tuple(digits))
    return to_interval(mat.apply(0), eps).hull(to_interval(mat.a / mat.c, eps))


def t_p_check(prefix: str, depth: int, m: int = 0):
    """Enclosure of the section B^k | A^3 W_k of T_P at k = depth, and the target value.

    The enclosure uses only the digits shared by that section and the limiting
    section ^inf B | A^3 P, so it contains 1/[B^inf] + [A^3 P] for the periodic
    extension P of ``prefix``.  Returns (enclosure, target).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    runs = parse_e_prefix(prefix)
    a, b = block_a(m), block_b(m)
    period = _expand(runs, m)
    # W_k: the first k (B, A) pairs of P
    w_runs = [runs[i % len(runs)] for i in range(2 * depth)]
    w_k = _expand(w_runs, m)
    left = tuple(reversed(b * depth))
    right = a * 3 + w_k
    enclosure = _cylinder(left) + _cylinder(right)
    target = eval_word(EvPeriodicWord((), b)).inverse() + eval_word(EvPeriodicWord(a * 3, period))
    if target not in enclosure:
        raise ArithmeticError("target outside section enclosure")
    return enclosure, target


def power_order_check(m: int, n_max: int = 3) -> bool:
    """[A^n Q] > [A^k R] for n > k, checked on the extreme words of E."""
    a, b = block_a(m), block_b(m)
    tails = [EvPeriodicWord((), b + a), EvPeriodicWord((), b + b + a + a), EvPeriodicWord((), b + a + a)]
    for n in range(1, n_max + 1):
        for k in range(0, n):
            lo_n = min((eval_word(t.prepend(a * n)) for t in tails), key=lambda v: float(v))
            hi_k = max((eval_word(t.prepend(a * k)) for t in tails), key=lambda v: float(v))
            if compare(lo_n, hi_k) <= 0:
                return False
    return True
