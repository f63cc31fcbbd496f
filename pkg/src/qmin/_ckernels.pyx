# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels`` with 128-bit integer arithmetic."""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    ctypedef long long int128 "__int128"

# rd * 2**64 must stay well inside a signed 128-bit integer
MAX_RADIUS_DEN = 1 << 60


cdef inline int128 floordiv(int128 a, int128 b) nogil:
    # b > 0
    cdef int128 q = a / b
    if (a % b != 0) and a < 0:
        q -= 1
    return q


cdef inline int64_t simplest_den(int128 xn, int128 xd, int128 yn, int128 yd) nogil:
    cdef int128 k1 = 0, k2 = 1, f, rx, ry, tmp
    while True:
        f = floordiv(xn, xd)
        if yd == 0 or (f + 1) * yd < yn:
            return <int64_t>((f + 1) * k1 + k2)
        tmp = k1
        k1 = f * k1 + k2
        k2 = tmp
        rx = xn - f * xd
        ry = yn - f * yd
        xn, xd, yn, yd = yd, ry, xd, rx


def qmin_dyadic(cnp.ndarray[cnp.uint64_t, ndim=1] ks, rn, rd):
    """Smallest denominators for the intervals ``(k/2**64 - r, k/2**64 + r)``, ``r = rn/rd``."""
    if not (0 < rn <= rd < MAX_RADIUS_DEN):
        raise OverflowError("radius does not fit the 128-bit kernel")
    cdef Py_ssize_t i, n = ks.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef uint64_t[:] kv = ks
    cdef int64_t[:] ov = out
    cdef int128 crn = <int128><int64_t>rn, crd = <int128><int64_t>rd
    cdef int128 den = crd << 64
    cdef int128 shift = crn << 64
    cdef int128 c
    with nogil:
        for i in range(n):
            c = (<int128>kv[i]) * crd
            ov[i] = simplest_den(c - shift, den, c + shift, den)
    return out
