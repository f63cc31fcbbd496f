"""Pure-Python kernels; reference semantics for the compiled ``_ckernels`` module."""
from __future__ import annotations

import numpy as np

_TWO64 = 1 << 64


def simplest_between(xn: int, xd: int, yn: int, yd: int) -> tuple[int, int]:
    """Fraction of smallest denominator strictly inside ``(xn/xd, yn/yd)``.

    Denominators must be positive and ``xn/xd < yn/yd``.  Continued-fraction
    descent: take the integer ``floor(x) + 1`` when it lies below ``y``,
    otherwise peel off ``floor(x)`` and recurse on the reciprocals of the
    fractional parts.  The upper end may become infinite (``yd == 0``).
    """
    h1, h2 = 1, 0  # numerator convergents
    k1, k2 = 0, 1  # denominator convergents
    while True:
        f = xn // xd
        if yd == 0 or (f + 1) * yd < yn:
            f += 1
            return f * h1 + h2, f * k1 + k2
        h1, h2 = f * h1 + h2, h1
        k1, k2 = f * k1 + k2, k1
        rx = xn - f * xd
        ry = yn - f * yd
        # x' = rx/xd in [0, 1), y' = ry/yd in (0, 1]; recurse on (1/y', 1/x')
        xn, xd, yn, yd = yd, ry, xd, rx


def qmin_dyadic(ks: np.ndarray, rn: int, rd: int) -> np.ndarray:
    """Smallest denominators for the intervals ``(k/2**64 - r, k/2**64 + r)``, ``r = rn/rd``."""
    den = rd * _TWO64
    shift = rn * _TWO64
    out = [simplest_between(k * rd - shift, den, k * rd + shift, den)[1] for k in ks.tolist()]
    try:
        return np.array(out, dtype=np.int64)
    except OverflowError:
        return np.array(out, dtype=object)
