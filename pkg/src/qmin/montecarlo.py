"""Monte Carlo estimate of the smallest-denominator distribution.

Centres are random dyadic rationals ``k / 2**64`` so the whole pipeline is
exact.  The sample stream is cut into fixed-size chunks and chunk ``j`` draws
from a Philox generator keyed by ``SeedSequence(seed, spawn_key=(j,))``, so
the histogram is identical for any number of worker threads.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DeltaMismatch, InvalidInput, SupportViolation
from .expectation import expected_value_pmf
from .pmf import SCHEMA_VERSION, PmfTable
from .rational import from_text, to_text

CHUNK = 1 << 16
RADIUS_CONVENTIONS = ("half-delta", "full-delta")


@dataclass(frozen=True)
class EmpiricalHistogram:
    delta: Fraction
    sample_count: int
    seed: int
    counts: dict[int, int]
    radius_convention: str = "half-delta"

    @property
    def interval_length(self) -> Fraction:
        return self.delta if self.radius_convention == "half-delta" else 2 * self.delta

    def frequency(self, q: int) -> float:
        return self.counts.get(q, 0) / self.sample_count

    def mean(self) -> float:
        return sum(q * c for q, c in self.counts.items()) / self.sample_count

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "count", "frequency"])
        for q in sorted(self.counts):
            w.writerow([q, self.counts[q], repr(self.frequency(q))])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "delta": to_text(self.delta),
                "sample_count": self.sample_count,
                "seed": self.seed,
                "radius_convention": self.radius_convention,
                "counts": [{"q": q, "count": self.counts[q]} for q in sorted(self.counts)],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> EmpiricalHistogram:
        obj = json.loads(text)
        return cls(
            from_text(obj["delta"]),
            int(obj["sample_count"]),
            int(obj["seed"]),
            {int(r["q"]): int(r["count"]) for r in obj["counts"]},
            obj.get("radius_convention", "half-delta"),
        )


def _chunk_counts(seed: int, j: int, size: int, rn: int, rd: int, backend) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(j,))
    ks = np.random.Philox(ss).random_raw(size)
    return np.bincount(kernels.qmin_dyadic(ks, rn, rd, backend=backend))


def sample_qmin(
    delta,
    n: int,
    seed: int,
    radius_convention: str = "half-delta",
    threads: int = 1,
    backend: str | None = None,
) -> EmpiricalHistogram:
    """Histogram of the smallest denominator over ``n`` uniform dyadic centres."""
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise InvalidInput(f"delta must lie in (0, 1), got {delta}")
    if n < 1:
        raise InvalidInput("n must be positive")
    if radius_convention not in RADIUS_CONVENTIONS:
        raise InvalidInput(f"radius convention must be one of {RADIUS_CONVENTIONS}")
    seed = int(seed) & ((1 << 64) - 1)
    radius = delta / 2 if radius_convention == "half-delta" else delta
    rn, rd = radius.numerator, radius.denominator

    sizes = [min(CHUNK, n - s) for s in range(0, n, CHUNK)]
    jobs = [(seed, j, size, rn, rd, backend) for j, size in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _chunk_counts(*a), jobs))
    else:
        parts = [_chunk_counts(*a) for a in jobs]

    total = np.zeros(max(len(p) for p in parts), dtype=np.int64)
    for p in parts:
        total[: len(p)] += p
    bound = math.floor(1 / (2 * radius)) + 1
    observed = np.flatnonzero(total)
    if total[0] or observed[-1] > bound:
        raise SupportViolation(
            f"sampled denominator {int(observed[-1])} outside support 1..{bound}"
        )
    counts = {int(q): int(total[q]) for q in observed}
    return EmpiricalHistogram(delta, n, seed, counts, radius_convention)


@dataclass(frozen=True)
class Comparison:
    sup_deviation: float
    argmax_q: int
    empirical_mean: float
    std_error: float
    exact_mean: Fraction
    z_score: float
    sample_count: int = field(default=0)

    def as_dict(self) -> dict:
        return {
            "sup_deviation": self.sup_deviation,
            "argmax_q": self.argmax_q,
            "empirical_mean": self.empirical_mean,
            "std_error": self.std_error,
            "exact_mean": to_text(self.exact_mean),
            "exact_mean_float": float(self.exact_mean),
            "z_score": self.z_score,
            "sample_count": self.sample_count,
        }


def compare_empirical(hist: EmpiricalHistogram, table: PmfTable) -> Comparison:
    """Sup-norm PMF deviation and a z-score of the sample mean against the exact mean."""
    if hist.interval_length != table.delta:
        raise DeltaMismatch(
            f"histogram interval length {hist.interval_length} != table delta {table.delta}"
        )
    N = hist.sample_count
    top = max(table.support_bound, max(hist.counts, default=1))
    sup, arg = 0.0, 1
    for q in range(1, top + 1):
        dev = abs(hist.counts.get(q, 0) / N - float(table.mass(q)))
        if dev > sup:
            sup, arg = dev, q
    mean = hist.mean()
    second = sum(q * q * c for q, c in hist.counts.items()) / N
    var = max(second - mean * mean, 0.0) * N / max(N - 1, 1)
    se = math.sqrt(var / N)
    exact = expected_value_pmf(table.delta, table=table)
    diff = mean - float(exact)
    z = diff / se if se > 0 else (0.0 if diff == 0 else math.copysign(math.inf, diff))
    return Comparison(sup, arg, mean, se, exact, z, N)
