"""Elementary arithmetic functions: gcd, modular inverse and a linear sieve for mu and phi."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput, NotCoprime, ResourceLimit

#: Largest sieve limit accepted by default (about 100 MB of Python lists).
SIEVE_CAP = 10**7


def gcd(a: int, b: int) -> int:
    """Non-negative greatest common divisor; ``gcd(0, 0) == 0``."""
    return math.gcd(a, b)


def mod_inverse(a: int, q: int) -> int:
    """Return the unique ``r`` in ``[1, q]`` with ``a * r == 1 (mod q)``.

    The range is ``[1, q]`` rather than ``[0, q)`` so that ``q == 1`` gives 1.
    """
    if q < 1:
        raise InvalidInput(f"modulus must be positive, got {q}")
    # extended Euclid
    old_r, r = a % q, q
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1 and q != 1:
        raise NotCoprime(f"gcd({a}, {q}) = {old_r} != 1")
    inv = old_s % q
    return inv if inv else q


@dataclass(frozen=True)
class SieveTable:
    """Moebius and totient values for ``1..limit``.

    Lists are indexed directly by ``n``; slot 0 holds a 0 placeholder.
    """

    limit: int
    mu: tuple[int, ...]
    phi: tuple[int, ...]
    spf: tuple[int, ...]

    def prime_factors(self, n: int) -> list[int]:
        """Distinct prime factors of ``n`` in increasing order."""
        if not 1 <= n <= self.limit:
            raise InvalidInput(f"{n} outside sieve range 1..{self.limit}")
        out = []
        while n > 1:
            p = self.spf[n]
            out.append(p)
            while n % p == 0:
                n //= p
        return out

    def squarefree_divisors(self, n: int) -> list[tuple[int, int]]:
        """Pairs ``(d, mu(d))`` for every squarefree divisor ``d`` of ``n``."""
        divs = [(1, 1)]
        for p in self.prime_factors(n):
            divs += [(d * p, -m) for d, m in divs]
        return divs


def sieve(limit: int, cap: int = SIEVE_CAP) -> SieveTable:
    """Linear sieve producing smallest prime factors, mu and phi up to ``limit``."""
    if limit < 1:
        raise InvalidInput(f"sieve limit must be >= 1, got {limit}")
    if limit > cap:
        raise ResourceLimit(f"sieve limit {limit} exceeds cap {cap}")
    spf = [0] * (limit + 1)
    mu = [0] * (limit + 1)
    phi = [0] * (limit + 1)
    mu[1] = phi[1] = 1
    if limit >= 1:
        spf[1] = 1
    primes: list[int] = []
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            mu[i] = -1
            phi[i] = i - 1
            primes.append(i)
        for p in primes:
            ip = i * p
            if p > spf[i] or ip > limit:
                break
            spf[ip] = p
            if p == spf[i]:
                mu[ip] = 0
                phi[ip] = phi[i] * p
            else:
                mu[ip] = -mu[i]
                phi[ip] = phi[i] * (p - 1)
    return SieveTable(limit, tuple(mu), tuple(phi), tuple(spf))
