"""Expected smallest denominator: two exact routes, the S(t) sum and the asymptotic law.

Route one sums ``q * p(q)`` over the exact PMF.  Route two uses Moebius
inversion over ``d = gcd(a, b)``::

    E = 3*delta + sum_d mu(d)/d * S(delta * d**2),
    S(t) = sum over ordered a != b of Pi(1/a, 1/b; t*(a + b)).

Both are exact rationals and must agree to the last digit.  The second is far
cheaper and is the one used for small ``delta``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from . import numtheory
from .errors import InvalidInput, QuadratureFailure
from .pmf import SCHEMA_VERSION, PmfTable, pmf
from .rational import exact_sum, harmonic_sum, to_text

#: Leading constant of the asymptotic law, 16/pi^2.
LEADING_CONSTANT = 16 / math.pi**2
#: Limit of S(t) * sqrt(t) as t -> 0.
S_CONSTANT = Fraction(8, 3)
D_EXACT = 4 - 2 * math.sqrt(2)


def expected_value_pmf(delta, table: PmfTable | None = None, **pmf_kwargs) -> Fraction:
    """``sum q * p(q)`` over the exact PMF (computed unless ``table`` is given)."""
    if table is None:
        table = pmf(delta, **pmf_kwargs)
    elif table.delta != Fraction(delta):
        raise InvalidInput("table was built for a different delta")
    return exact_sum(q * p for q, p in table.items())


def _s_terms(n: int, m: int) -> tuple[int, np.ndarray]:
    """Integer data of ``S(n/m)``: ``S = 2 * (t * W + sum_k c[k] / k)``.

    Only pairs ``a < b`` are visited (the factor 2 restores order).  With
    ``M = floor(m/n)`` the kernel term for fixed ``a`` is ``t(a+b)`` for
    ``b(a+b) <= M``, ``1/b`` up to ``a(a+b) <= M``, then
    ``1/a + 1/b - t(a+b)`` up to ``ab <= M``, and zero after that, so each
    case is a contiguous range of ``b``.
    """
    M = m // n
    W = 0
    diff = np.zeros(M + 2, dtype=np.int64)
    point = np.zeros(M + 2, dtype=np.int64)
    a = 1
    while a * (a + 1) <= M:
        r = math.isqrt(a * a + 4 * M)
        b1 = (r - a) // 2
        while (b1 + 1) * (a + b1 + 1) <= M:
            b1 += 1
        while b1 * (a + b1) > M:
            b1 -= 1
        b3 = M // a
        b2 = b3 - a
        lo = a + 1
        if b1 >= lo:
            W += _arith_sum(a, lo, b1)
            lo = b1 + 1
        if b2 >= lo:
            diff[lo] += 1
            diff[b2 + 1] -= 1
            lo = b2 + 1
        if b3 >= lo:
            diff[lo] += 1
            diff[b3 + 1] -= 1
            point[a] += b3 - lo + 1
            W -= _arith_sum(a, lo, b3)
        a += 1
    coeffs = np.cumsum(diff[:-1]) + point[:-1]
    return W, coeffs


def _arith_sum(a: int, lo: int, hi: int) -> int:
    # sum of (a + b) for lo <= b <= hi
    cnt = hi - lo + 1
    return cnt * a + (lo + hi) * cnt // 2


def s_function(t) -> Fraction:
    """Exact ``S(t)``; zero for ``t >= 1/2``."""
    t = Fraction(t)
    if t <= 0:
        raise InvalidInput("t must be positive")
    W, coeffs = _s_terms(t.numerator, t.denominator)
    return 2 * (t * W + harmonic_sum(coeffs))


def mobius_terms(delta) -> list[int]:
    """The ``d`` that contribute to the Moebius route, i.e. ``delta * d**2 < 1/2``."""
    delta = Fraction(delta)
    ds = []
    d = 1
    while 2 * delta * d * d < 1:
        ds.append(d)
        d += 1
    return ds


def expected_value_mobius(delta) -> Fraction:
    """Exact ``E`` from ``3 delta + sum_d mu(d)/d S(delta d^2)`` for ``delta < 1/2``.

    The harmonic parts of all ``S(delta d^2)`` are pooled on the index
    ``d * k`` so a single exact harmonic sum is taken at the end.
    """
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise InvalidInput(f"the Moebius route needs delta in (0, 1/2), got {delta}")
    n, m = delta.numerator, delta.denominator
    ds = mobius_terms(delta)
    mu = numtheory.sieve(max(ds)).mu
    pooled = np.zeros(m // n + 2, dtype=np.int64)
    R = 0
    for d in ds:
        if mu[d] == 0:
            continue
        W, c = _s_terms(n * d * d, m)
        R += mu[d] * d * W
        # c[k] / (d k) lands on index d k
        view = pooled[d::d]
        view[: len(c) - 1] += mu[d] * c[1:]
    return 3 * delta + 2 * delta * R + 2 * harmonic_sum(pooled)


def asymptotic_estimate(delta) -> float:
    """Leading-order ``16/pi^2 * delta**-0.5``."""
    delta = float(delta)
    if not delta > 0:
        raise InvalidInput("delta must be positive")
    return LEADING_CONSTANT / math.sqrt(delta)


@dataclass(frozen=True)
class ExpectationReport:
    delta: Fraction
    exact_value: Fraction
    asymptotic: float
    deficit: float
    normalized_deficit: float

    @property
    def ratio(self) -> float:
        """Exact value over the leading-order term; tends to 1."""
        return float(self.exact_value) / self.asymptotic

    def row(self) -> dict:
        num, den = to_text(self.exact_value).split("/")
        return {
            "delta": to_text(self.delta),
            "exact_num": num,
            "exact_den": den,
            "exact_float": float(self.exact_value),
            "asymptotic": self.asymptotic,
            "deficit": self.deficit,
            "normalized_deficit": self.normalized_deficit,
        }


REPORT_COLUMNS = [
    "delta", "exact_num", "exact_den", "exact_float", "asymptotic", "deficit", "normalized_deficit",
]


def expectation_report(delta, exact_value: Fraction | None = None) -> ExpectationReport:
    delta = Fraction(delta)
    if exact_value is None:
        exact_value = expected_value_mobius(delta)
    asym = asymptotic_estimate(delta)
    deficit = float(exact_value) - asym
    return ExpectationReport(delta, exact_value, asym, deficit, deficit / math.log(delta) ** 2)


def asymptotic_diagnostics(deltas: Iterable) -> list[ExpectationReport]:
    return [expectation_report(d) for d in deltas]


def reports_to_csv(reports: Sequence[ExpectationReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def reports_to_json(reports: Sequence[ExpectationReport]) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "reports": [r.row() for r in reports]})


@dataclass(frozen=True)
class ConstantsReport:
    tolerance: float
    integrals: tuple[float, float, float, float]
    error_bound: float
    tail_value: float
    tail_bound: float
    D: float
    C: float
    D_error: float
    C_error: float

    @property
    def passed(self) -> bool:
        return self.D_error < self.tolerance and self.C_error < self.tolerance

    def as_dict(self) -> dict:
        out = asdict(self)
        out["integrals"] = list(self.integrals)
        out["passed"] = self.passed
        return out


def _quad(f, a: float, b: float, eps: float) -> tuple[float, float]:
    val, err, info = integrate.quad(f, a, b, epsabs=eps, epsrel=0.0, limit=200, full_output=True)[:3]
    if "ierr" in info and info.get("ierr", 0):
        raise QuadratureFailure(f"quad failed on [{a}, {b}]")
    return val, err


def _log_tail(R: float, eps: float) -> tuple[float, float]:
    # int_R^inf -log(1 - s^-2) ds = sum_k R^(1-2k) / (k (2k - 1))
    total, k = 0.0, 1
    while True:
        term = R ** (1 - 2 * k) / (k * (2 * k - 1))
        total += term
        nxt = R ** (-1 - 2 * k) / ((k + 1) * (2 * k + 1))
        if nxt < eps:
            return total, nxt / (1 - R**-2)
        k += 1


def verify_constants(tolerance: float = 1e-8) -> ConstantsReport:
    """Evaluate the four log integrals numerically and compare with ``4 - 2 sqrt 2`` and 8/3.

    The improper piece is integrated up to the point ``R`` where its
    integrand (at most ``1/(s^2 - 1)``) is below ``tolerance/10`` and the
    remainder is summed from its power series with a geometric bound.
    """
    if not tolerance > 0:
        raise InvalidInput("tolerance must be positive")
    eps = tolerance / 100
    r2 = math.sqrt(2)
    parts = []
    errs = []
    v, e = _quad(lambda s: 2 * math.log(s), 1.0, r2, eps)
    parts.append(v), errs.append(e)

    R = math.sqrt(1 + 10 / tolerance)
    f2 = lambda s: -math.log1p(-1.0 / (s * s))
    v2, e2 = 0.0, 0.0
    a = r2
    while a < R:
        b = min(2 * a, R)
        v, e = _quad(f2, a, b, eps / 64)
        v2, e2 = v2 + v, e2 + e
        a = b
    tail, tail_bound = _log_tail(R, eps)
    parts.append(v2 + tail), errs.append(e2 + tail_bound)

    v, e = _quad(lambda s: -math.log1p(-s * s), 0.0, 1 / r2, eps)
    parts.append(v), errs.append(e)
    v, e = _quad(lambda s: -2 * math.log(s), 1 / r2, 1.0, eps)
    parts.append(v), errs.append(e)

    err = math.fsum(errs) + 64 * math.ulp(1.0)
    if 2 * err >= tolerance:
        raise QuadratureFailure(f"error bound {err:.3e} does not certify tolerance {tolerance:.1e}")
    D = math.fsum(parts)
    C = 4 * r2 - 16 / 3 + 2 * D
    return ConstantsReport(
        tolerance=tolerance,
        integrals=tuple(parts),
        error_bound=err,
        tail_value=tail,
        tail_bound=tail_bound,
        D=D,
        C=C,
        D_error=abs(D - D_EXACT),
        C_error=abs(C - 8 / 3),
    )
