"""Exact elementary number theory shared by every other module.

Everything here works on plain Python integers; nothing is ever rounded.
Factorization is deliberately desk-scale: trial division up to 10**6 with a
deterministic Miller-Rabin check on the cofactor.  Inputs that would force a
guess raise TooLargeError instead of returning a wrong answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# Deterministic Miller-Rabin witnesses, valid for n < 3.3e14.
_MR_LIMIT = 330 * 10**12
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17)

_TRIAL_BOUND = 10**6


class TooLargeError(ValueError):
    """Input exceeds the supported (desk-scale) size."""


def valuation(n: int, p: int) -> int:
    """Largest k with p**k dividing n (n must be nonzero)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError("p must be at least 2")
    k = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        k += 1
    return k


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for n >= 1, with the usual conventions at 2."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    result = 1
    # strip the even part of n; (a|2) = 0, 1, -1 for a even, a = ±1 (8), a = ±3 (8)
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol on the odd part via reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality for n < 3.3e14; larger inputs raise."""
    if n >= _MR_LIMIT:
        raise TooLargeError(f"primality test supports n < {_MR_LIMIT}")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """A positive integer together with its sorted prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError("value must be positive")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError("factors do not multiply back to value")

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Factor n >= 1 by trial division, never returning a wrong answer."""
    if n < 1:
        raise ValueError("n must be positive")
    value = n
    factors: list[tuple[int, int]] = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
    # trial divisors 6k±1
    d = 5
    while d <= _TRIAL_BOUND and d * d <= n:
        for q in (d, d + 2):
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                factors.append((q, e))
        d += 6
    if n > 1:
        if d * d > n or is_prime(n):
            factors.append((n, 1))
        else:
            r = math.isqrt(n)
            if r * r == n and is_prime(r):
                factors.append((r, 2))
            else:
                raise TooLargeError(f"cofactor {n} is composite and beyond desk scale")
    factors.sort()
    return Factorization(value, tuple(factors))


def prime_factors(n: int) -> tuple[int, ...]:
    return factorize(n).primes()


def prime_to_part(n: int, primes) -> int:
    """Divide every p in `primes` out of n to full multiplicity."""
    if n == 0:
        raise ValueError("n must be nonzero")
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n)).factors)
