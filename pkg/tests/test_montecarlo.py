import math
import statistics
from fractions import Fraction

import numpy as np
import pytest

from qmin import kernels, montecarlo
from qmin.errors import DeltaMismatch, InvalidInput, SupportViolation
from qmin.expectation import expected_value_mobius
from qmin.montecarlo import EmpiricalHistogram, compare_empirical, sample_qmin
from qmin.pmf import pmf

F = Fraction


def test_half_delta_only_one_and_two():
    n = 10**5
    h = sample_qmin(F(1, 2), n, seed=1)
    assert set(h.counts) <= {1, 2}
    assert sum(h.counts.values()) == n
    assert abs(h.frequency(1) - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_tenth_mass_at_one():
    n, d = 10**5, 0.1
    h = sample_qmin(F(1, 10), n, seed=7)
    assert abs(h.frequency(1) - d) <= 3 * math.sqrt(d * (1 - d) / n)
    assert max(h.counts) <= 11


def test_deterministic_and_thread_independent():
    a = sample_qmin(F(1, 30), 150_000, seed=42)
    b = sample_qmin(F(1, 30), 150_000, seed=42)
    c = sample_qmin(F(1, 30), 150_000, seed=42, threads=4)
    assert a == b == c
    assert sample_qmin(F(1, 30), 150_000, seed=43) != a


@pytest.mark.skipif(kernels._ckernels is None, reason="compiled kernels not built")
def test_backend_independent():
    a = sample_qmin(F(3, 200), 20_000, seed=5, backend="cython")
    b = sample_qmin(F(3, 200), 20_000, seed=5, backend="python")
    assert a == b


def test_support_violation_is_raised(monkeypatch):
    monkeypatch.setattr(kernels, "qmin_dyadic", lambda ks, rn, rd, backend=None: np.full(len(ks), 99))
    with pytest.raises(SupportViolation):
        sample_qmin(F(1, 10), 100, seed=0)


def test_full_delta_convention_matches_doubled_length():
    h = sample_qmin(F(1, 20), 200_000, seed=3, radius_convention="full-delta")
    assert h.interval_length == F(1, 10)
    assert max(h.counts) <= 11
    rep = compare_empirical(h, pmf(F(1, 10)))
    assert abs(rep.z_score) < 4
    with pytest.raises(DeltaMismatch):
        compare_empirical(h, pmf(F(1, 20)))


def test_invalid_inputs():
    with pytest.raises(InvalidInput):
        sample_qmin(F(1), 10, seed=0)
    with pytest.raises(InvalidInput):
        sample_qmin(F(1, 2), 0, seed=0)
    with pytest.raises(InvalidInput):
        sample_qmin(F(1, 2), 10, seed=0, radius_convention="diameter")


def test_compare_degenerate_exact_histogram():
    N = 10**6
    table = pmf(F(1, 37))
    counts = {q: round(p * N) for q, p in table.items() if round(p * N)}
    h = EmpiricalHistogram(F(1, 37), N, 0, counts)
    assert compare_empirical(h, table).sup_deviation <= 1 / N


def test_compare_mismatched_delta():
    h = sample_qmin(F(1, 10), 1000, seed=0)
    with pytest.raises(DeltaMismatch):
        compare_empirical(h, pmf(F(1, 11)))


def test_mean_within_four_standard_errors():
    delta = F(1, 100)
    h = sample_qmin(delta, 10**6, seed=11)
    rep = compare_empirical(h, pmf(delta))
    assert rep.exact_mean == expected_value_mobius(delta)
    assert abs(rep.empirical_mean - float(rep.exact_mean)) <= 4 * rep.std_error


def test_sup_deviation_shrinks_with_sample_size():
    table = pmf(F(1, 10))

    def median_sup(n):
        return statistics.median(compare_empirical(sample_qmin(F(1, 10), n, seed=s), table).sup_deviation
                                 for s in range(10))

    assert median_sup(40_000) < median_sup(20_000)


def test_histogram_serialization_round_trip():
    h = sample_qmin(F(2, 51), 5000, seed=9)
    assert EmpiricalHistogram.from_json(h.to_json()) == h
    rows = h.to_csv().splitlines()
    assert rows[0] == "q,count,frequency"
    assert sum(int(r.split(",")[1]) for r in rows[1:]) == 5000
