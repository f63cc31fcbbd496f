"""Exact rational arithmetic.

Every probability, interval endpoint and expectation in the package is a
:class:`fractions.Fraction`, aliased here as :data:`Rational`.  Fractions are
immutable and always held in lowest terms with a positive denominator, which
is exactly the canonical form the rest of the code relies on.

The long exact sums (harmonic-type sums with hundreds of thousands of terms)
go through :func:`exact_sum` / :func:`harmonic_sum`, which merge terms
pairwise over least common multiples.  When :mod:`gmpy2` is importable the
merge runs on GMP integers; otherwise plain Python integers are used.
"""
from __future__ import annotations

import enum
import math
import operator
import sys
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

try:
    import gmpy2

    _mpz = gmpy2.mpz
    _gcd = gmpy2.gcd
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    gmpy2 = None
    _mpz = int
    _gcd = math.gcd
    HAVE_GMPY2 = False

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def arith(op: str, a: Fraction, b: Fraction) -> Fraction:
    """Apply ``op`` (add, sub, mul, div); division by zero raises ZeroDivisionError."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(Fraction(a), Fraction(b))


def compare(a: Fraction, b: Fraction) -> Ordering:
    # cross-multiplication; denominators are positive so the sign is preserved
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return Ordering.LT if lhs < rhs else Ordering.GT if lhs > rhs else Ordering.EQ


def mediant(a: Fraction, b: Fraction) -> Fraction:
    """The mediant ``(a.num + b.num) / (a.den + b.den)``, reduced."""
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


def from_coprime(num: int, den: int) -> Fraction:
    """Build a Fraction from a pair already known to be in lowest terms.

    Skips the gcd that ``Fraction(num, den)`` would recompute; that gcd is
    quadratic in CPython and dominates for million-bit values.
    """
    num, den = int(num), int(den)
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(num, den, _normalize=False)


def reduce(num: int, den: int) -> Fraction:
    """Fraction ``num/den`` reduced with the fastest gcd available."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    g = _gcd(_mpz(num), _mpz(den))
    num, den = _mpz(num) // g, _mpz(den) // g
    if den < 0:
        num, den = -num, -den
    return from_coprime(num, den)


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string exactly.

    Decimal input is read in base 10 (``"0.37"`` is 37/100); binary floats are
    refused because the conversion would silently change the value.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as a rational: {exc}") from None


def int_to_str(n: int) -> str:
    if gmpy2 is not None:
        return _mpz(n).digits(10)
    with _unlimited_digits():
        return str(n)


def str_to_int(s: str) -> int:
    if gmpy2 is not None:
        return int(_mpz(s.strip(), 10))
    with _unlimited_digits():
        return int(s)


class _unlimited_digits:
    # CPython >= 3.10.7 caps int<->str conversions at 4300 digits by default
    def __enter__(self):
        self._old = getattr(sys, "get_int_max_str_digits", lambda: 0)()
        if hasattr(sys, "set_int_max_str_digits"):
            sys.set_int_max_str_digits(0)

    def __exit__(self, *exc):
        if hasattr(sys, "set_int_max_str_digits"):
            sys.set_int_max_str_digits(self._old)


def to_text(r: Fraction) -> str:
    """Render as ``"num/den"`` (denominator always present)."""
    return f"{int_to_str(r.numerator)}/{int_to_str(r.denominator)}"


def from_text(s: str) -> Fraction:
    """Inverse of :func:`to_text`; also accepts a bare integer."""
    num, _, den = s.partition("/")
    return reduce(str_to_int(num), str_to_int(den) if den else 1)


def _split_sum(nums: Sequence, dens: Sequence, lo: int, hi: int):
    if hi - lo == 1:
        return nums[lo], dens[lo]
    mid = (lo + hi) // 2
    p1, q1 = _split_sum(nums, dens, lo, mid)
    p2, q2 = _split_sum(nums, dens, mid, hi)
    g = _gcd(q1, q2)
    a, b = q1 // g, q2 // g
    return p1 * b + p2 * a, a * q2


def _finish(nums: list, dens: list) -> Fraction:
    if not nums:
        return Fraction(0)
    p, q = _split_sum(nums, dens, 0, len(nums))
    return reduce(p, q)


def exact_sum(values: Iterable[Fraction]) -> Fraction:
    """Exact sum of fractions by pairwise merging over lcm denominators."""
    nums, dens = [], []
    for v in values:
        v = Fraction(v)
        if v:
            nums.append(_mpz(v.numerator))
            dens.append(_mpz(v.denominator))
    return _finish(nums, dens)


def harmonic_sum(coeffs: Sequence[int], offset: int = 0) -> Fraction:
    """Exact ``sum(coeffs[i] / (i + offset))`` over the nonzero coefficients.

    Index positions with ``i + offset <= 0`` must carry a zero coefficient.
    """
    nums, dens = [], []
    if isinstance(coeffs, np.ndarray) and coeffs.dtype.kind in "iu":
        idx = np.flatnonzero(coeffs)
        if len(idx) and idx[0] + offset <= 0:
            raise ValueError("nonzero coefficient at a non-positive index")
        nums = [_mpz(c) for c in coeffs[idx].tolist()]
        dens = [_mpz(k + offset) for k in idx.tolist()]
        return _finish(nums, dens)
    for i, c in enumerate(coeffs):
        c = int(c)
        if c:
            k = i + offset
            if k <= 0:
                raise ValueError("nonzero coefficient at a non-positive index")
            nums.append(_mpz(c))
            dens.append(_mpz(k))
    return _finish(nums, dens)
