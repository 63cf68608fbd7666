"""Exact integer primitives: gcd, valuations, Kronecker symbol, roots, factoring.

Everything here works on Python ints and never falls back to floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

TRIAL_BOUND = 10**6
RHO_BUDGET = 2_000_000

# Deterministic Miller-Rabin: these bases are exact below this limit.
MR_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactorizationError(ArithmeticError):
    """Raised when a number cannot be completely factored within the effort bounds."""


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def valuation(p: int, n: int) -> int:
    """Largest mu with p**mu dividing n."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError(f"not a prime: {p}")
    n = abs(n)
    mu = 0
    while n % p == 0:
        n //= p
        mu += 1
    return mu


_KRONECKER_2 = (0, 1, 0, -1, 0, -1, 0, 1)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for every integer n including 0, negatives and evens."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = _KRONECKER_2[a & 7] if v & 1 else 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n & 7 in (3, 5):
                k = -k
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def cube_root_exact(n: int) -> Optional[int]:
    """Integer r with r**3 == n, or None when n is not a perfect cube."""
    if n < 0:
        r = cube_root_exact(-n)
        return None if r is None else -r
    if n < 2:
        return n
    # integer Newton iteration from above converges to floor(cbrt(n))
    x = 1 << -(-n.bit_length() // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    return x if x * x * x == n else None


@lru_cache(maxsize=4)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    A composite verdict is a proof at any size; a prime verdict is only
    certified below MR_LIMIT, so larger probable primes raise instead.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    if n >= MR_LIMIT:
        raise FactorizationError(f"primality of {n} is outside the certified range")
    return True


def _brent(n: int, budget: int) -> int:
    """Nontrivial factor of the odd composite n, or 0 when the budget runs out."""
    spent = 0
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
            if spent > budget:
                return 0
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return 0


def _split(n: int, budget: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, budget, out)
        _split(r, budget, out)
        return
    f = _brent(n, budget)
    if not f:
        raise FactorizationError(f"factorization of {n} incomplete (rho budget {budget})")
    _split(f, budget, out)
    _split(n // f, budget, out)


def factorize(n: int, trial_bound: int = TRIAL_BOUND, rho_budget: int = RHO_BUDGET) -> Factorization:
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}
    limit = min(trial_bound, math.isqrt(n))
    for p in primes_up_to(trial_bound):
        if p > limit:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
            limit = min(limit, math.isqrt(n))
    if n > 1:
        # no prime <= limit divides n, so n is prime once limit reaches isqrt(n)
        if math.isqrt(n) <= limit:
            found[n] = found.get(n, 0) + 1
        else:
            _split(n, rho_budget, found)
    return Factorization(sign, tuple(sorted(found.items())))


def squarefree_part(n: int) -> tuple[int, int]:
    """Return (d, t) with n == t*t*d, d square-free and t > 0."""
    f = factorize(n)
    d, t = f.sign, 1
    for p, e in f.factors:
        t *= p ** (e // 2)
        if e & 1:
            d *= p
    return d, t


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)
