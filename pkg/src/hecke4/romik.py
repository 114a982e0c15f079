"""Romik digit words, digit matrices and evaluation of eventually periodic words."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .qfield import INF, SQRT2, Mobius, compare, sign

__all__ = [
    "Word",
    "EvPeriodicWord",
    "BiSection",
    "digit_matrix",
    "word_matrix",
    "eval_word",
    "expand",
    "to_word",
    "vee",
    "reverse",
    "reduce_pair",
    "primitive_root",
    "parse_word",
    "H",
    "IDENTITY",
]

Word = tuple  # tuple of ints in {1, 2, 3}

_N = {
    1: Mobius(1, 0, SQRT2, 1),
    2: Mobius(1, SQRT2, SQRT2, 1),
    3: Mobius(1, SQRT2, 0, 1),
}
_N_INV = {d: m.inverse() for d, m in _N.items()}
IDENTITY = Mobius(1, 0, 0, 1)
H = Mobius(-1, 0, 0, 1)  # v -> -v

_INV_SQRT2 = SQRT2 / 2


def _check_digits(w: Iterable[int]) -> Word:
    w = tuple(int(d) for d in w)
    for d in w:
        if d not in (1, 2, 3):
            raise ValueError(f"invalid Romik digit {d!r}")
    return w


def digit_matrix(d: int) -> Mobius:
    try:
        return _N[d]
    except KeyError:
        raise ValueError(f"invalid Romik digit {d!r}") from None


@lru_cache(maxsize=200000)
def word_matrix(w: Word) -> Mobius:
    """Product N_{w[0]} N_{w[1]} ... (identity for the empty word)."""
    if not w:
        return IDENTITY
    if len(w) == 1:
        return _N[w[0]]
    half = len(w) // 2
    return word_matrix(w[:half]) @ word_matrix(w[half:])


def vee(w):
    """Swap digits 1 and 3; works on tuples and on EvPeriodicWord."""
    if isinstance(w, EvPeriodicWord):
        return EvPeriodicWord(vee(w.prefix), vee(w.cycle))
    return tuple(4 - d if d != 2 else 2 for d in w)


def reverse(w: Sequence[int]) -> Word:
    return tuple(reversed(tuple(w)))


def primitive_root(w: Word) -> Word:
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def rotations(w: Word) -> Iterator[Word]:
    for i in range(len(w)):
        yield w[i:] + w[:i]


@dataclass(frozen=True, order=True)
class EvPeriodicWord:
    """The one-sided word prefix cycle cycle cycle ..., kept in canonical form."""

    prefix: Word
    cycle: Word

    def __init__(self, prefix: Iterable[int] = (), cycle: Iterable[int] = (1,)):
        prefix = _check_digits(prefix)
        cycle = _check_digits(cycle)
        if not cycle:
            raise ValueError("cycle must be nonempty")
        cycle = primitive_root(cycle)
        while prefix and prefix[-1] == cycle[-1]:
            cycle = cycle[-1:] + cycle[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    @classmethod
    def parse(cls, text: str) -> EvPeriodicWord:
        m = re.fullmatch(r"\s*([123]*)\(([123]+)\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse word {text!r}; expected e.g. '3(2)'")
        return cls(tuple(map(int, m.group(1))), tuple(map(int, m.group(2))))

    def __str__(self) -> str:
        return "".join(map(str, self.prefix)) + "(" + "".join(map(str, self.cycle)) + ")"

    def digit(self, i: int) -> int:
        """Zero-based digit lookup."""
        lp = len(self.prefix)
        if i < lp:
            return self.prefix[i]
        return self.cycle[(i - lp) % len(self.cycle)]

    def digits(self, n: int) -> Word:
        return tuple(self.digit(i) for i in range(n))

    def shift(self, n: int = 1) -> EvPeriodicWord:
        lp = len(self.prefix)
        if n <= lp:
            return EvPeriodicWord(self.prefix[n:], self.cycle)
        k = (n - lp) % len(self.cycle)
        return EvPeriodicWord((), self.cycle[k:] + self.cycle[:k])

    def prepend(self, w: Iterable[int]) -> EvPeriodicWord:
        return EvPeriodicWord(tuple(w) + self.prefix, self.cycle)

    def value(self):
        return eval_word(self)

    def __len__(self) -> int:
        return len(self.prefix) + len(self.cycle)


def parse_word(text: str) -> EvPeriodicWord:
    return EvPeriodicWord.parse(text)


@lru_cache(maxsize=200000)
def cycle_fixed_point(cycle: Word):
    return word_matrix(cycle).attracting_fixed_point()


@lru_cache(maxsize=200000)
def _eval(prefix: Word, cycle: Word):
    return word_matrix(prefix).apply(cycle_fixed_point(cycle))


def eval_word(w) -> object:
    """Value [w] of an eventually periodic word (INF for words ending in 3s)."""
    if isinstance(w, str):
        w = EvPeriodicWord.parse(w)
    return _eval(w.prefix, w.cycle)


def _digit_of(v) -> int:
    if compare(v, _INV_SQRT2) <= 0:
        return 1
    if compare(v, SQRT2) <= 0:
        return 2
    return 3


def expand(v, n: int):
    """First n digits of v >= 0 and the remainder after removing them.

    Stops early once the remainder is 0 or infinity.
    """
    if v is not INF and sign(v) < 0:
        raise ValueError("expand needs a nonnegative value")
    digits = []
    for _ in range(n):
        if v is INF or (v is not INF and sign(v) == 0):
            break
        d = _digit_of(v)
        digits.append(d)
        v = _N_INV[d].apply(v)
    return tuple(digits), v


def to_word(v, max_steps: int = 10000) -> EvPeriodicWord:
    """Eventually periodic Romik expansion of a value in Q(sqrt2) or a quadratic extension."""
    if v is INF:
        return EvPeriodicWord((), (3,))
    if sign(v) < 0:
        raise ValueError("to_word needs a nonnegative value")
    seen: dict = {}
    digits: list[int] = []
    for i in range(max_steps):
        if v is INF:
            return EvPeriodicWord(digits, (3,))
        if sign(v) == 0:
            return EvPeriodicWord(digits, (1,))
        if v in seen:
            j = seen[v]
            return EvPeriodicWord(digits[:j], digits[j:])
        seen[v] = i
        d = _digit_of(v)
        digits.append(d)
        v = _N_INV[d].apply(v)
    raise ArithmeticError("expansion did not become periodic (is the value a quadratic surd?)")


# ---------------------------------------------------------------------------
# two-sided sections


@dataclass(frozen=True)
class BiSection:
    """A cut P*|Q of a two-sided word: left = P read outward, right = Q."""

    left: EvPeriodicWord
    right: EvPeriodicWord

    def __str__(self) -> str:
        lp = "".join(map(str, reversed(self.left.prefix)))
        lc = "".join(map(str, reversed(self.left.cycle)))
        return f"({lc}){lp}|{self.right}"

    @classmethod
    def parse(cls, text: str) -> BiSection:
        try:
            left, right = text.split("|")
        except ValueError:
            raise ValueError(f"cannot parse section {text!r}; expected e.g. '(13)|(31)'") from None
        m = re.fullmatch(r"\s*\(([123]+)\)([123]*)\s*", left)
        if not m:
            raise ValueError(f"cannot parse left side {left!r}; expected e.g. '(13)2'")
        lc = tuple(map(int, reversed(m.group(1))))
        lp = tuple(map(int, reversed(m.group(2))))
        return cls(EvPeriodicWord(lp, lc), EvPeriodicWord.parse(right))

    def value(self):
        p, q = eval_word(self.left), eval_word(self.right)
        if p is INF or q is INF:
            return INF
        return p + q

    def vee(self) -> BiSection:
        return BiSection(vee(self.left), vee(self.right))


def _negate(v):
    return v if v is INF else -v


def reduce_pair(xi, eta) -> tuple[BiSection, Mobius]:
    """Reduce the geodesic with endpoints xi, eta to a section P*|Q.

    Returns the section together with the map M (a word in H and the N_d^{-1})
    sending xi to -[P] and eta to [Q].  The reduced section satisfies
    [P] + [Q] >= |eta - xi|.
    """
    if xi is INF and eta is INF or (xi is not INF and eta is not INF and compare(xi, eta) == 0):
        raise ValueError("endpoints must be distinct")
    inf_word = EvPeriodicWord((), (3,))
    if eta is INF:
        m = IDENTITY if sign(xi) <= 0 else H
        return BiSection(to_word(-m.apply(xi)), inf_word), m
    if xi is INF:
        m = IDENTITY if sign(eta) >= 0 else H
        return BiSection(inf_word, to_word(m.apply(eta))), m

    sx, se = sign(xi), sign(eta)
    if sx <= 0 <= se:
        return BiSection(to_word(-xi), to_word(eta)), IDENTITY
    if se <= 0 <= sx:
        # xi is on the right: flip orientation with H
        return BiSection(to_word(xi), to_word(-eta)), H

    # both endpoints strictly on one side: move to the positive side
    g = IDENTITY if sx > 0 else H
    a = to_word(g.apply(xi))
    b = to_word(g.apply(eta))
    if a == b:
        raise ValueError("endpoints must be distinct")
    k = 0
    while a.digit(k) == b.digit(k):
        k += 1
    swapped = a.digit(k) < b.digit(k)
    if swapped:
        a, b = b, a
    m = _N_INV[a.digit(k)] @ word_matrix(a.digits(k)).inverse() @ g
    (c,) = {1, 2, 3} - {a.digit(k), b.digit(k)}
    # the endpoint with the larger digit lands on +[rest of a], the other on -[c, rest of b]
    p_word, q_word = a.shift(k + 1), b.shift(k + 1).prepend((c,))
    if swapped:
        return BiSection(q_word, p_word), m
    return BiSection(p_word, q_word), H @ m
