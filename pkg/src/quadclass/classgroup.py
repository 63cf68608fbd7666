"""Class numbers of quadratic fields from binary quadratic forms.

Imaginary fields: count reduced positive-definite forms, with the finite
character-sum formula as an independent cross-check.  Real fields: count
cycles of reduced indefinite forms under the reduction operator rho, which
gives the narrow class number, then halve it when the fundamental unit has
norm +1.

Both enumerations run over the first coefficient a and solve
b^2 = delta (mod 4a) directly, so the work is roughly sqrt(|delta|) modular
square roots instead of a scan over every (a, b) pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator, Optional

from .arith import kronecker
from .quadfield import field_from, is_fundamental

REAL_CUTOFF = 10**12
IMAG_CUTOFF = 10**10

FORM_COUNT = "form-count"
FORM_CYCLES = "form-cycles"
ANALYTIC = "analytic-oracle"


class DiscriminantTooLarge(ValueError):
    """The discriminant exceeds the configured enumeration cutoff."""


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced_imaginary(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and abs(b) <= a <= c):
            return False
        if abs(b) == a or a == c:
            return b >= 0
        return True

    def is_reduced_real(self) -> bool:
        delta = self.discriminant
        if delta <= 0 or self.a == 0:
            return False
        s = isqrt(delta)
        return _real_b_min(abs(self.a), s) <= self.b <= s

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class ClassNumberResult:
    d: int
    delta: int
    h: int
    h_narrow: int
    unit_norm: Optional[int]
    method: str

    @property
    def is_real(self) -> bool:
        return self.delta > 0


def _real_b_min(a: int, s: int) -> int:
    """Least b with b > |sqrt(delta) - 2a| and b > 0, where s = isqrt(delta) and delta is not a square."""
    lo = s - 2 * a + 1 if 2 * a <= s else 2 * a - s
    return max(lo, 1)


def _spf_table(n: int) -> list[int]:
    """Smallest prime factor of every integer up to n."""
    spf = list(range(n + 1))
    for p in range(isqrt(n), 1, -1):
        if spf[p] == p:
            # descending p: smaller primes overwrite later
            spf[p * p :: p] = [p] * len(range(p * p, n + 1, p))
    return spf


class _SqrtModFour:
    """Square roots of delta modulo 4a, for every a up to a fixed limit."""

    def __init__(self, delta: int, limit: int):
        self.delta = delta
        self.spf = _spf_table(max(limit, 2))
        self._odd: dict[tuple[int, int], list[int]] = {}
        self._two: dict[int, list[int]] = {}

    def _odd_roots(self, p: int, e: int) -> list[int]:
        key = (p, e)
        if key in self._odd:
            return self._odd[key]
        delta = self.delta
        pe = p**e
        dp = delta % p
        if dp == 0:
            roots = [0] if e == 1 else [r for r in self._lift_brute([0], p, e)]
        elif pow(dp, (p - 1) // 2, p) != 1:
            roots = []
        else:
            r = _sqrt_mod_prime(dp, p)
            # Hensel: the derivative 2r is a unit mod p
            q = p
            for _ in range(1, e):
                q *= p
                r = (r - (r * r - delta) * pow(2 * r, -1, q)) % q
            roots = sorted({r % pe, -r % pe})
        self._odd[key] = roots
        return roots

    def _lift_brute(self, roots: list[int], p: int, e: int) -> list[int]:
        q = p
        for _ in range(1, e):
            nq = q * p
            roots = [x for r in roots for x in range(r, nq, q) if (x * x - self.delta) % nq == 0]
            q = nq
        return roots

    def _two_roots(self, k: int) -> list[int]:
        """Roots of x^2 = delta mod 2**k."""
        if k not in self._two:
            roots = [x for x in (0, 1) if (x * x - self.delta) % 2 == 0]
            self._two[k] = self._lift_brute(roots, 2, k)
        return self._two[k]

    def roots(self, a: int) -> list[int]:
        """Residues b mod 2a with b^2 = delta (mod 4a)."""
        spf = self.spf
        e2 = 0
        while a % (1 << (e2 + 1)) == 0:
            e2 += 1
        n = a >> e2
        modulus = 1 << (e2 + 2)
        current = self._two_roots(e2 + 2)
        while n > 1 and current:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pe = p**e
            rs = self._odd_roots(p, e)
            inv = pow(modulus, -1, pe)
            current = [r + modulus * ((s - r) * inv % pe) for r in current for s in rs]
            modulus *= pe
        half = modulus // 2
        return sorted({r % half for r in current})


def _sqrt_mod_prime(n: int, p: int) -> int:
    """Tonelli-Shanks; n must be a nonzero quadratic residue mod the odd prime p."""
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _require_fundamental(delta: int) -> None:
    if not is_fundamental(delta):
        raise ValueError(f"{delta} is not a fundamental discriminant")


# --- imaginary fields ---------------------------------------------------------


def reduced_forms_imaginary(delta: int, cutoff: int = IMAG_CUTOFF) -> list[QuadForm]:
    if delta >= 0:
        raise ValueError("imaginary discriminant must be negative")
    if -delta > cutoff:
        raise DiscriminantTooLarge(f"|delta| = {-delta} exceeds cutoff {cutoff}")
    _require_fundamental(delta)
    amax = isqrt(-delta // 3)
    sq = _SqrtModFour(delta, amax)
    forms = []
    for a in range(1, amax + 1):
        for r in sq.roots(a):
            b = r if r <= a else r - 2 * a
            c = (b * b - delta) // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            forms.append(QuadForm(a, b, c))
    return forms


def _unit_count(delta: int) -> int:
    return {-3: 6, -4: 4}.get(delta, 2)


def class_number_imaginary(delta: int, cutoff: int = IMAG_CUTOFF) -> ClassNumberResult:
    h = len(reduced_forms_imaginary(delta, cutoff))
    d = delta if delta % 4 == 1 else delta // 4
    return ClassNumberResult(d, delta, h, h, None, FORM_COUNT)


def class_number_imaginary_analytic(delta: int) -> int:
    """h = w / (2|delta|) * |sum_{k<|delta|} (delta/k) k|, in exact integers."""
    if delta >= 0:
        raise ValueError("imaginary discriminant must be negative")
    _require_fundamental(delta)
    n = -delta
    spf = _spf_table(max(n, 2))
    chi = [0] * n
    if n > 1:
        chi[1] = 1
    for k in range(2, n):
        p = spf[k]
        chi[k] = kronecker(delta, p) if p == k else chi[p] * chi[k // p]
    total = sum(chi[k] * k for k in range(1, n))
    num = _unit_count(delta) * abs(total)
    h, rem = divmod(num, 2 * n)
    if rem:
        raise ArithmeticError(f"character sum for {delta} is not divisible by 2|delta|")
    return h


# --- real fields --------------------------------------------------------------


def cf_unit_norm(d: int) -> tuple[int, int]:
    """Period of the continued fraction of the maximal-order generator omega, and the unit norm.

    omega is sqrt(d) for d = 2, 3 (mod 4) and (1 + sqrt(d))/2 for d = 1 (mod 4);
    the fundamental unit has norm -1 exactly when the period is odd.
    """
    if d <= 1:
        raise ValueError("d must be > 1")
    s = isqrt(d)
    if s * s == d:
        raise ValueError(f"{d} is a perfect square")
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    q = (P + s) // Q
    P = q * Q - P
    Q = (d - P * P) // Q
    start = (P, Q)
    period = 0
    while True:
        q = (P + s) // Q
        P = q * Q - P
        Q = (d - P * P) // Q
        period += 1
        if (P, Q) == start:
            break
    return period, (-1 if period % 2 else 1)


def reduced_forms_real(delta: int) -> Iterator[QuadForm]:
    """All reduced indefinite forms (a, b, c) of the fundamental discriminant delta > 0."""
    s = isqrt(delta)
    sq = _SqrtModFour(delta, s)
    for a in range(1, s + 1):
        lo = _real_b_min(a, s)
        if lo > s:
            continue
        step = 2 * a
        for r in sq.roots(a):
            b = lo + (r - lo) % step
            while b <= s:
                c = (b * b - delta) // (4 * a)
                yield QuadForm(a, b, c)
                yield QuadForm(-a, b, -c)
                b += step


def rho(form: QuadForm, delta: Optional[int] = None) -> QuadForm:
    """One reduction step (a, b, c) -> (c, b', c') with b' = -b (mod 2c), sqrt(delta) - 2|c| < b' < sqrt(delta)."""
    a, b, c = form
    if delta is None:
        delta = b * b - 4 * a * c
    s = isqrt(delta)
    b2 = s - (s + b) % (2 * abs(c))
    return QuadForm(c, b2, (b2 * b2 - delta) // (4 * c))


def form_cycles(delta: int) -> list[list[QuadForm]]:
    """Partition the reduced forms of discriminant delta into rho-cycles."""
    s = isqrt(delta)
    width = 2 * s + 3
    seen: set[int] = set()
    cycles = []
    for f in reduced_forms_real(delta):
        key = f.a * width + f.b
        if key in seen:
            continue
        cycle = [f]
        seen.add(key)
        g = rho(f, delta)
        while g != f:
            seen.add(g.a * width + g.b)
            cycle.append(g)
            g = rho(g, delta)
        cycles.append(cycle)
    return cycles


def _count_cycles(delta: int) -> int:
    # same walk as form_cycles without holding the cycles in memory
    s = isqrt(delta)
    width = 2 * s + 3
    seen: set[int] = set()
    count = 0
    for a0, b0, c0 in ((f.a, f.b, f.c) for f in reduced_forms_real(delta)):
        key = a0 * width + b0
        if key in seen:
            continue
        count += 1
        seen.add(key)
        a, b, c = a0, b0, c0
        while True:
            m = 2 * c if c > 0 else -2 * c
            b = s - (s + b) % m
            a, c = c, (b * b - delta) // (4 * c)
            if a == a0 and b == b0:
                break
            seen.add(a * width + b)
    return count


def principal_form(delta: int) -> QuadForm:
    s = isqrt(delta)
    b = s if (s - delta) % 2 == 0 else s - 1
    return QuadForm(1, b, (b * b - delta) // 4)


def unit_norm_from_cycles(delta: int) -> int:
    """-1 iff the principal form and its negative share a rho-cycle."""
    f = principal_form(delta)
    target = QuadForm(-f.a, f.b, -f.c)
    g = rho(f, delta)
    while g != f:
        if g == target:
            return -1
        g = rho(g, delta)
    return 1


def class_number_real(delta: int, cutoff: int = REAL_CUTOFF) -> ClassNumberResult:
    if delta <= 0:
        raise ValueError("real discriminant must be positive")
    if isqrt(delta) ** 2 == delta:
        raise ValueError(f"{delta} is a perfect square")
    if delta > cutoff:
        raise DiscriminantTooLarge(f"delta = {delta} exceeds cutoff {cutoff}")
    _require_fundamental(delta)
    d = delta if delta % 4 == 1 else delta // 4
    h_narrow = _count_cycles(delta)
    _, norm = cf_unit_norm(d)
    if norm == 1:
        if h_narrow % 2:
            raise ArithmeticError(f"odd narrow class number {h_narrow} with a norm +1 unit")
        h = h_narrow // 2
    else:
        h = h_narrow
    return ClassNumberResult(d, delta, h, h_narrow, norm, FORM_CYCLES)


def class_number(n: int, real_cutoff: int = REAL_CUTOFF, imag_cutoff: int = IMAG_CUTOFF) -> ClassNumberResult:
    """Class number of Q(sqrt(n)) for any non-square n (square factors are stripped first)."""
    field = field_from(n)
    if field.is_real:
        return class_number_real(field.delta, real_cutoff)
    return class_number_imaginary(field.delta, imag_cutoff)
