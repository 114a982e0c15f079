"""Integer solutions of 2x^2 + y1^2 + y2^2 = 4 x y1 y2 and the discrete spectrum below 2*sqrt2."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .qfield import QSqrt2, sqrt

__all__ = ["VSTriple", "neighbors", "enumerate_triples", "n2_m2_sets", "discrete_spectrum", "SpectrumValue"]


@dataclass(frozen=True, order=True)
class VSTriple:
    x: int
    y1: int
    y2: int

    def __post_init__(self):
        if min(self.x, self.y1, self.y2) <= 0:
            raise ValueError("triple entries must be positive")
        if 2 * self.x**2 + self.y1**2 + self.y2**2 != 4 * self.x * self.y1 * self.y2:
            raise ValueError(f"{self} is not on the surface 2x²+y1²+y2²=4xy1y2")

    def canonical(self) -> VSTriple:
        if self.y1 <= self.y2:
            return self
        return VSTriple(self.x, self.y2, self.y1)

    def __str__(self) -> str:
        return f"({self.x}; {self.y1}, {self.y2})"


def neighbors(t: VSTriple) -> list[VSTriple | None]:
    """The three Vieta moves; a move that leaves the positive octant gives None."""
    x, y1, y2 = t.x, t.y1, t.y2
    out: list[VSTriple | None] = []
    for cand in ((2 * y1 * y2 - x, y1, y2), (x, 4 * x * y2 - y1, y2), (x, y1, 4 * x * y1 - y2)):
        out.append(VSTriple(*cand) if min(cand) > 0 else None)
    return out


def enumerate_triples(bound: int) -> set[VSTriple]:
    """All triples (in canonical y1 <= y2 order) reachable from (1;1,1) with entries <= bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    root = VSTriple(1, 1, 1)
    seen = {root}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for nb in neighbors(t):
            if nb is None or max(nb.x, nb.y1, nb.y2) > bound:
                continue
            nb = nb.canonical()
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return seen


def n2_m2_sets(bound: int) -> tuple[list[int], list[int]]:
    """Sorted x-values and y-values of the triples with entries <= bound."""
    ts = enumerate_triples(bound)
    xs = sorted({t.x for t in ts})
    ys = sorted({t.y1 for t in ts} | {t.y2 for t in ts})
    return xs, ys


@dataclass(frozen=True)
class SpectrumValue:
    value: object
    source: str  # "x" or "y"
    n: int


def discrete_spectrum(bound: int) -> list[SpectrumValue]:
    """sqrt(8 - 2/x^2) and sqrt(8 - 4/y^2) for enumerated x, y, ascending."""
    xs, ys = n2_m2_sets(bound)
    # 8 - k/n^2 increases as k/n^2 decreases, so sort by the rational key
    entries = [(Fraction(2, x * x), "x", x) for x in xs] + [(Fraction(4, y * y), "y", y) for y in ys]
    entries.sort(key=lambda e: -e[0])
    out = []
    last = None
    for key, src, n in entries:
        if key == last:
            continue
        last = key
        out.append(SpectrumValue(sqrt(QSqrt2(8 - key)), src, n))
    return out
