"""Smallest denominators of fractions in random intervals, computed exactly."""
from .errors import (
    DeltaMismatch,
    InvalidInput,
    InvalidInterval,
    NotCoprime,
    QminError,
    QuadratureFailure,
    ResourceLimit,
    SupportViolation,
)
from .expectation import (
    asymptotic_diagnostics,
    asymptotic_estimate,
    expected_value_mobius,
    expected_value_pmf,
    s_function,
    verify_constants,
)
from .farey import farey_neighbors, farey_sequence, phi_Q_map, smallest_denominator
from .montecarlo import compare_empirical, sample_qmin
from .pmf import classify_case, interval_decomposition, pi_kernel, pmf
from .rational import Rational, mediant, parse_rational

__version__ = "0.1.0"
