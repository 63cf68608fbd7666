"""Cubic trinomials X^3 - A X - B: irreducibility, ramification at 3, and the KM conditions."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt
from typing import Optional

from .arith import FactorizationError, cube_root_exact, gcd, is_square, squarefree_part, valuation


@dataclass(frozen=True)
class CubicTrinomial:
    """X^3 - A*X - B."""

    A: int
    B: int

    def __call__(self, x: int) -> int:
        return x * x * x - self.A * x - self.B

    def __str__(self) -> str:
        parts = ["X^3"]
        if self.A:
            parts.append(f"{'-' if self.A > 0 else '+'} {abs(self.A)}X")
        if self.B:
            parts.append(f"{'-' if self.B > 0 else '+'} {abs(self.B)}")
        return " ".join(parts)


def kishi_trinomial(norm: int, trace: int) -> CubicTrinomial:
    """X^3 - 3 N^(1/3) X - T for an element of cube norm N and trace T."""
    r = cube_root_exact(norm)
    if r is None:
        raise ValueError(f"norm {norm} is not a perfect cube")
    return CubicTrinomial(3 * r, trace)


def km_polynomial(u: int, v: int) -> CubicTrinomial:
    """x^3 - u v x - u^2."""
    return CubicTrinomial(u * v, u * u)


def cubic_discriminant(t: CubicTrinomial) -> int:
    return 4 * t.A**3 - 27 * t.B**2


def _monotone_zero(f: CubicTrinomial, lo: int, hi: int, increasing: bool) -> Optional[int]:
    """Integer zero of f on [lo, hi], where f is monotone on that range."""
    if lo > hi:
        return None
    sign = 1 if increasing else -1
    if sign * f(lo) > 0 or sign * f(hi) < 0:
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if sign * f(mid) < 0:
            lo = mid + 1
        else:
            hi = mid
    return lo if f(lo) == 0 else None


def rational_root(t: CubicTrinomial) -> Optional[int]:
    """An integer root of t, if any (rational roots of a monic integer cubic are integers)."""
    if t.B == 0:
        return 0
    bound = 1 + max(abs(t.A), abs(t.B))
    if t.A <= 0:
        return _monotone_zero(t, -bound, bound, True)
    # turning points at +-sqrt(A/3); floor(sqrt(A/3)) == isqrt(A // 3)
    u = isqrt(t.A // 3)
    for lo, hi, inc in ((-bound, -u - 1, True), (-u, u, False), (u + 1, bound, True)):
        r = _monotone_zero(t, lo, hi, inc)
        if r is not None:
            return r
    return None


def is_irreducible_q(t: CubicTrinomial) -> bool:
    """A cubic is irreducible over Q iff it has no rational root."""
    return rational_root(t) is None


def is_irreducible_mod_p(t: CubicTrinomial, p: int) -> bool:
    A, B = t.A % p, t.B % p
    return all((x * x * x - A * x - B) % p for x in range(p))


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def irreducibility_prime(t: CubicTrinomial, primes=_SMALL_PRIMES) -> Optional[int]:
    """Smallest listed prime modulo which t stays irreducible."""
    for p in primes:
        if is_irreducible_mod_p(t, p):
            return p
    return None


class LnOutcome(enum.Enum):
    LN1 = "LN-1"
    LN2 = "LN-2"
    LN3 = "LN-3"
    NOT_TOTALLY_RAMIFIED = "not totally ramified"

    @property
    def totally_ramified(self) -> bool:
        return self is not LnOutcome.NOT_TOTALLY_RAMIFIED


class LemmaHypothesisError(ValueError):
    pass


def _v3(n: int) -> float:
    # v3(0) = infinity here; the lemma's conditions compare valuations of possibly zero coefficients
    return float("inf") if n == 0 else valuation(3, n)


def ln_totally_ramified(a: int, b: int) -> LnOutcome:
    """Whether 3 is totally ramified in Q(theta), theta a root of X^3 - aX - b."""
    if not is_irreducible_q(CubicTrinomial(a, b)):
        raise LemmaHypothesisError(f"lemma hypotheses not met: X^3 - {a}X - {b} is reducible")
    va, vb = _v3(a), _v3(b)
    if not (va < 2 or vb < 3):
        raise LemmaHypothesisError(f"lemma hypotheses not met: v3(a) = {va}, v3(b) = {vb}")
    if 1 <= vb <= va:
        return LnOutcome.LN1
    if a % 3 == 0 and a % 9 != 3 and b % 3 and (b * b - a - 1) % 9:
        return LnOutcome.LN2
    if a % 9 == 3 and b % 3 and (b * b - a - 1) % 27:
        return LnOutcome.LN3
    return LnOutcome.NOT_TOTALLY_RAMIFIED


@dataclass(frozen=True)
class KmReport:
    u: int
    v: int
    km1: bool
    km2: bool
    km3: bool
    km4: Optional[str]
    disc: int
    d_field: Optional[int]

    @property
    def passes(self) -> bool:
        return self.km1 and self.km2 and self.km3 and self.km4 is not None


def _km4_branch(u: int, v: int) -> Optional[str]:
    if v % 3:
        return "a"
    near = lambda mod: (u - v - 1) % mod == 0 or (u - v + 1) % mod == 0  # noqa: E731
    if (u * v) % 9 != 3 and near(9):
        return "b"
    if (u * v) % 9 == 3 and near(27):
        return "c"
    return None


def km_check(u: int, v: int) -> KmReport:
    t = km_polynomial(u, v)
    disc = cubic_discriminant(t)
    try:
        d_field = squarefree_part(disc)[0] if disc else None
    except FactorizationError:
        d_field = None
    return KmReport(
        u=u,
        v=v,
        km1=gcd(u, v) == 1,
        km2=is_irreducible_q(t),
        km3=not is_square(disc),
        km4=_km4_branch(u, v),
        disc=disc,
        d_field=d_field,
    )
