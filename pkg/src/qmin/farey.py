"""Farey sequences, Farey neighbours and the smallest-denominator search."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import numtheory
from ._pykernels import simplest_between
from .errors import InvalidInput, InvalidInterval, ResourceLimit

#: Default cap on the order of generated Farey sequences.
FAREY_CAP = 5000


@dataclass(frozen=True)
class FareyNeighbors:
    """``left < center < right`` consecutive in ``F_q`` plus ``1/1``, where ``q = center.denominator``."""

    center: Fraction
    left: Fraction
    right: Fraction

    @property
    def q(self) -> int:
        return self.center.denominator

    @property
    def q_left(self) -> int:
        return self.left.denominator

    @property
    def q_right(self) -> int:
        return self.right.denominator


def iter_farey(Q: int, cap: int = FAREY_CAP) -> Iterator[Fraction]:
    """Yield ``F_Q`` (reduced ``a/q`` with ``0 <= a < q <= Q``) in increasing order."""
    if Q < 1:
        raise InvalidInput(f"Farey order must be >= 1, got {Q}")
    if Q > cap:
        raise ResourceLimit(f"Farey order {Q} exceeds cap {cap}")
    a, b, c, d = 0, 1, 1, Q
    yield Fraction(0, 1)
    while c < d:
        yield Fraction(c, d, _normalize=False)
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b


def farey_sequence(Q: int, cap: int = FAREY_CAP) -> list[Fraction]:
    return list(iter_farey(Q, cap))


def farey_neighbors(f: Fraction) -> FareyNeighbors:
    """Neighbours of ``a/q`` (``q >= 2``) from ``q' = a^{-1} mod q`` and ``q'' = q - q'``."""
    f = Fraction(f)
    a, q = f.numerator, f.denominator
    if q < 2 or not 0 <= a < q:
        raise InvalidInput(f"need 0 <= a < q with q >= 2, got {f}")
    qp = numtheory.mod_inverse(a, q)
    qpp = q - qp
    left = Fraction((a * qp - 1) // q, qp)
    right = Fraction((a * qpp + 1) // q, qpp)
    return FareyNeighbors(f, left, right)


def phi_Q_map(Q: int, cap: int = FAREY_CAP) -> list[tuple[tuple[int, int], Fraction]]:
    """Graph of the bijection ``F_Q -> {(m, n): 1 <= m <= n <= Q, gcd(m, n) = 1}``."""
    out = []
    for f in iter_farey(Q, cap):
        if f.denominator == 1:
            out.append(((1, 1), f))
        else:
            out.append(((farey_neighbors(f).q_left, f.denominator), f))
    return out


def smallest_denominator(lo: Fraction, hi: Fraction) -> Fraction:
    """The reduced fraction of least denominator in the open interval ``(lo, hi)``.

    When the interval contains integers the result is ``floor(lo) + 1``.
    Endpoints themselves never count.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise InvalidInterval(f"empty interval ({lo}, {hi})")
    a, q = simplest_between(lo.numerator, lo.denominator, hi.numerator, hi.denominator)
    # past q = 1 only one multiple of 1/q fits strictly inside (lo, hi)
    assert q == 1 or math.ceil(hi * q) - 1 - math.floor(lo * q) == 1, (lo, hi, a, q)
    return Fraction(a, q, _normalize=False)


def qmin_at(x: Fraction, delta: Fraction) -> Fraction:
    """Smallest-denominator fraction in ``(x - delta/2, x + delta/2)``."""
    x, delta = Fraction(x), Fraction(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    half = delta / 2
    return smallest_denominator(x - half, x + half)
