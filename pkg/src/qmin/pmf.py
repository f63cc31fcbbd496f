"""Probability mass function of the smallest denominator in a random interval.

``x`` is uniform on ``[0, 1)`` and the interval is ``(x - delta/2, x + delta/2)``.
Two exact constructions are provided and cross-checked in the tests:

* :func:`pmf` sums the trapezoid kernel :func:`pi_kernel` over coprime splits
  ``a + b = q``.
* :func:`interval_decomposition` builds, for every Farey fraction, the set of
  centres ``x`` for which it is the minimal witness, from its Farey neighbours.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import numtheory
from .farey import farey_neighbors, iter_farey
from .errors import InvalidInput, ResourceLimit
from .rational import _mpz, exact_sum, from_text, reduce, to_text

#: Largest support bound Q accepted by :func:`pmf` unless overridden.
Q_CAP = 20_000
#: Largest support bound accepted by :func:`interval_decomposition`.
DECOMPOSITION_CAP = 2_000

SCHEMA_VERSION = 1


class Case(str, enum.Enum):
    I = "I"
    IIa = "IIa"
    IIb = "IIb"
    III = "III"
    IV = "IV"


def _check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise InvalidInput(f"delta must lie in (0, 1), got {delta}")
    return delta


def support_bound(delta: Fraction) -> int:
    """``floor(1/delta) + 1``: every interval of length delta holds a fraction with denominator at most this."""
    return math.floor(1 / Fraction(delta)) + 1


def pi_kernel(alpha: Fraction, beta: Fraction, t: Fraction) -> Fraction:
    """Trapezoid ``Pi(alpha, beta; t)``: rises as ``t``, flat at ``min``, falls to 0 at ``alpha + beta``."""
    if alpha <= 0 or beta <= 0:
        raise InvalidInput("alpha and beta must be positive")
    if t < 0:
        raise InvalidInput("t must be non-negative")
    lo, hi = (alpha, beta) if alpha <= beta else (beta, alpha)
    if t <= lo:
        return t
    if t <= hi:
        return lo
    s = alpha + beta
    if t <= s:
        return s - t
    return Fraction(0)


def classify_case(qp: int, qpp: int, delta: Fraction) -> Case:
    """Case of ``I_{a/q}`` from the neighbour denominators ``q'``, ``q''``.

    Ties go to the earliest applicable case, except that a zero-length set is
    always :attr:`Case.IV`.
    """
    delta = _check_delta(delta)
    if qp < 1 or qpp < 1:
        raise InvalidInput("neighbour denominators must be positive")
    q = qp + qpp
    left = Fraction(1, q * qp)
    right = Fraction(1, q * qpp)
    if left >= delta and right >= delta:
        return Case.I
    if left <= delta <= right:
        return Case.IIa
    if right <= delta <= left:
        return Case.IIb
    if Fraction(1, qp * qpp) > delta:
        return Case.III
    return Case.IV


@dataclass(frozen=True)
class IntervalRecord:
    """Closure of ``I_{a/q}``: centres ``x`` whose minimal witness is ``fraction``.

    For case IV the endpoints are those of the case III formula and
    ``hi < lo``.  The record for ``0/1`` wraps around the circle and is
    stored as ``[-delta/2, delta/2]`` with ``wraps`` set.
    """

    fraction: Fraction
    case: Case
    lo: Fraction
    hi: Fraction
    length: Fraction
    wraps: bool = False


def interval_decomposition(delta, cap: int = DECOMPOSITION_CAP) -> list[IntervalRecord]:
    delta = _check_delta(delta)
    Q = support_bound(delta)
    if Q > cap:
        raise ResourceLimit(f"support bound {Q} exceeds decomposition cap {cap}")
    half = delta / 2
    out = [IntervalRecord(Fraction(0), Case.I, -half, half, delta, wraps=True)]
    for f in iter_farey(Q, cap):
        if f.denominator == 1:
            continue
        nb = farey_neighbors(f)
        case = classify_case(nb.q_left, nb.q_right, delta)
        lo = nb.left + half if case in (Case.IIa, Case.III, Case.IV) else f - half
        hi = nb.right - half if case in (Case.IIb, Case.III, Case.IV) else f + half
        out.append(IntervalRecord(f, case, lo, hi, max(hi - lo, Fraction(0))))
    return out


@dataclass(frozen=True)
class PmfTable:
    """Exact masses ``p(1), ..., p(Q)``; ``masses[q - 1]`` is the mass at ``q``."""

    delta: Fraction
    support_bound: int
    masses: tuple[Fraction, ...]

    def mass(self, q: int) -> Fraction:
        if 1 <= q <= self.support_bound:
            return self.masses[q - 1]
        return Fraction(0)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return enumerate(self.masses, start=1)

    def total(self) -> Fraction:
        return exact_sum(self.masses)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "mass_num", "mass_den", "mass_float"])
        for q, p in self.items():
            num, den = to_text(p).split("/")
            w.writerow([q, num, den, repr(float(p))])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "delta": to_text(self.delta),
                "support_bound": self.support_bound,
                "masses": [
                    {"q": q, "mass": to_text(p), "mass_float": float(p)} for q, p in self.items()
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> PmfTable:
        obj = json.loads(text)
        masses = tuple(from_text(row["mass"]) for row in obj["masses"])
        return cls(from_text(obj["delta"]), int(obj["support_bound"]), masses)

    @classmethod
    def from_csv(cls, text: str, delta) -> PmfTable:
        rows = list(csv.DictReader(io.StringIO(text)))
        masses = tuple(from_text(f"{r['mass_num']}/{r['mass_den']}") for r in rows)
        return cls(Fraction(delta), len(masses), masses)


def _lcm_upto(n: int):
    L = _mpz(1)
    for k in range(2, n + 1):
        L = L * (k // math.gcd(int(L % k), k))
    return L


def _pmf_grouped(delta: Fraction, Q: int) -> list[Fraction]:
    """Masses for q >= 3 grouped by kernel case.

    For ``a < b = q - a`` the term ``Pi(1/(qa), 1/(qb); delta)`` is ``delta``
    when ``qb <= M``, ``1/(qb)`` when ``qa <= M < qb``, ``1/(qa) + 1/(qb) - delta``
    when ``qa > M`` and ``ab <= M``, and 0 otherwise, where ``M = floor(1/delta)``.
    Each condition selects a contiguous range of ``a``, so only coprime
    counts and coprime harmonic sums over ranges are needed; those come from
    Moebius inversion over the squarefree divisors of ``q``.
    """
    n, m = delta.numerator, delta.denominator
    M = m // n
    table = numtheory.sieve(Q)
    L = _lcm_upto(Q)
    # HL[k] = L * H(k)
    HL = [_mpz(0)] * (Q + 1)
    for k in range(1, Q + 1):
        HL[k] = HL[k - 1] + L // k

    out = []
    for q in range(3, Q + 1):
        divs = table.squarefree_divisors(q)

        def count(lo: int, hi: int) -> int:
            if hi < lo:
                return 0
            return sum(mu * (hi // d - (lo - 1) // d) for d, mu in divs)

        def harm(lo: int, hi: int):
            # L * sum of 1/k over lo <= k <= hi with gcd(k, q) = 1
            if hi < lo:
                return 0
            return sum(mu * ((HL[hi // d] - HL[(lo - 1) // d]) // d) for d, mu in divs)

        h = (q - 1) // 2
        K = M // q
        # case 1: b <= K
        c1_lo, c1_hi = max(1, q - K), h
        # case 2: a <= K < b
        c2_lo, c2_hi = 1, min(K, q - K - 1, h)
        # case 3: a > K and a * (q - a) <= M; a * (q - a) increases on [1, h]
        A = _max_product_index(q, M, h)
        c3_lo, c3_hi = K + 1, A
        n1 = count(c1_lo, c1_hi)
        n3 = count(c3_lo, c3_hi)
        X = harm(q - c2_hi, q - c2_lo) + harm(c3_lo, c3_hi) + harm(q - c3_hi, q - c3_lo)
        num = 2 * n * (n1 - n3) * q * L + 2 * m * X
        out.append(reduce(num, m * q * L))
    return out


def _max_product_index(q: int, M: int, h: int) -> int:
    """Largest ``a`` in ``[0, h]`` with ``a * (q - a) <= M``."""
    if h * (q - h) <= M:
        return h
    disc = q * q - 4 * M
    # a * (q - a) <= M  <=>  a <= (q - sqrt(q^2 - 4M)) / 2  on the increasing branch
    a = (q - math.isqrt(disc)) // 2 if disc >= 0 else h
    a = min(max(a, 0), h)
    while a < h and (a + 1) * (q - a - 1) <= M:
        a += 1
    while a > 0 and a * (q - a) > M:
        a -= 1
    return a


def _pmf_direct(delta: Fraction, Q: int) -> list[Fraction]:
    out = []
    for q in range(3, Q + 1):
        out.append(
            exact_sum(
                pi_kernel(Fraction(1, q * a), Fraction(1, q * (q - a)), delta)
                for a in range(1, q)
                if math.gcd(a, q) == 1
            )
        )
    return out


def pmf(delta, method: str = "grouped", q_cap: int = Q_CAP) -> PmfTable:
    """Exact PMF of the smallest denominator for interval length ``delta``.

    ``method="grouped"`` evaluates the coprime kernel sums range by range;
    ``method="direct"`` adds every kernel term one by one (slow, for checks).
    """
    delta = _check_delta(delta)
    Q = support_bound(delta)
    if Q > q_cap:
        raise ResourceLimit(f"support bound {Q} exceeds cap {q_cap}; raise q_cap to override")
    masses = [delta]
    if Q >= 2:
        masses.append(pi_kernel(Fraction(1, 2), Fraction(1, 2), delta))
    if method == "grouped":
        masses += _pmf_grouped(delta, Q)
    elif method == "direct":
        masses += _pmf_direct(delta, Q)
    else:
        raise InvalidInput(f"unknown pmf method {method!r}")
    return PmfTable(delta, Q, tuple(masses))
