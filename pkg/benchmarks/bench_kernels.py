"""Compare the compiled and pure-Python q_min kernels.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 3]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from qmin import kernels
from qmin._pykernels import qmin_dyadic as py_qmin


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.Generator(np.random.Philox(0))
    ks = rng.integers(0, 2**63, size=args.n, dtype=np.uint64)
    print(f"compiled backend available: {kernels.BACKEND == 'cython'}")
    print(f"{'delta':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for delta in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 10**4)):
        r = delta / 2
        t_py, out_py = _best(lambda: py_qmin(ks, r.numerator, r.denominator), args.repeat)
        if kernels.BACKEND == "cython":
            t_c, out_c = _best(
                lambda: kernels.qmin_dyadic(ks, r.numerator, r.denominator, backend="cython"), args.repeat
            )
            assert np.array_equal(np.asarray(out_py, dtype=np.int64), np.asarray(out_c, dtype=np.int64))
            print(f"{str(delta):>10} {t_py:10.3f} {t_c:10.4f} {t_py / t_c:8.1f}")
        else:
            print(f"{str(delta):>10} {t_py:10.3f} {'n/a':>10} {'n/a':>8}")


if __name__ == "__main__":
    main()
