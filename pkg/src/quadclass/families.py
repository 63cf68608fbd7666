"""The eight parametrized families of quadratic fields with 3 | h, and their certificates.

Each generator validates its parameters, evaluates the family's discriminant
formula, and re-derives the algebraic facts the divisibility argument rests on:

* Kishi-type families (Thm2_1 .. Thm2_5): an element alpha of the mirror field
  with cube norm N and trace T, gcd(N, T) = 1, the trinomial
  X^3 - 3 N^(1/3) X - T irreducible, and 3 not totally ramified in its cubic
  field.
* Kishi-Miyake families (Thm3_1I, Thm3_1II): the conditions KM-1..KM-4 on
  x^3 - u v x - u^2 and the discriminant identity.
* Thm3_2: 2(1 + sqrt(1 - 2m^3)) is not a cube, via a finite Diophantine check.

An instance is only returned when every check holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .arith import factorize, gcd, is_square, isqrt, kronecker, squarefree_part, valuation
from .classgroup import IMAG_CUTOFF, REAL_CUTOFF, DiscriminantTooLarge, class_number
from .quadfield import mirror_d
from .trinomial import (
    CubicTrinomial,
    KmReport,
    LnOutcome,
    irreducibility_prime,
    is_irreducible_mod_p,
    is_irreducible_q,
    kishi_trinomial,
    km_check,
    km_polynomial,
    ln_totally_ramified,
)


class ParameterError(ValueError):
    """Parameters violate the family's hypotheses."""


class ExcludedField(ValueError):
    """The discriminant formula lands on a square, d = 1 or d = -3."""


class CertificateError(ArithmeticError):
    """A proof-side check failed for parameters that passed validation."""


class FamilyId(enum.Enum):
    Thm2_1 = "thm2_1"
    Thm2_2 = "thm2_2"
    Thm2_3 = "thm2_3"
    Thm2_4 = "thm2_4"
    Thm2_5 = "thm2_5"
    Thm3_1I = "thm3_1i"
    Thm3_1II = "thm3_1ii"
    Thm3_2 = "thm3_2"

    @classmethod
    def parse(cls, name: str) -> "FamilyId":
        key = name.strip().lower().replace(".", "_").replace("-", "_")
        if not key.startswith("thm"):
            key = "thm" + key
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown family {name!r}; expected one of {[m.value for m in cls]}")


@dataclass(frozen=True)
class KishiCertificate:
    norm: int
    trace: int
    trinomial: CubicTrinomial
    irreducible_mod: Optional[int]
    irreducible_q: bool
    ln: LnOutcome
    mirror_D: int
    alpha_field: int

    def summary(self) -> str:
        mod = f"irreducible mod {self.irreducible_mod}" if self.irreducible_mod else "no rational root"
        return f"f = {self.trinomial}; gcd(N,T)=1; {mod}; {self.ln.value} at 3; alpha in Q(sqrt({self.mirror_D}))"


@dataclass(frozen=True)
class KmCertificate:
    report: KmReport
    irreducible_mod: int
    disc_ratio: int

    def summary(self) -> str:
        r = self.report
        return (
            f"f_{{{r.u},{r.v}}}: KM-1..3 hold, KM-4({r.km4}); irreducible mod {self.irreducible_mod}; "
            f"disc = {self.disc_ratio}*d"
        )


@dataclass(frozen=True)
class CubeCertificate:
    d_prime: int
    t: int
    split_primes: tuple[int, ...]
    not_a_cube: bool

    def summary(self) -> str:
        return f"1-2m^3 = {self.t}^2*({self.d_prime}); 2*alpha not a cube; split primes {list(self.split_primes)}"


Certificate = Union[KishiCertificate, KmCertificate, CubeCertificate]


@dataclass(frozen=True)
class FamilyInstance:
    id: FamilyId
    params: dict[str, Union[int, str]] = field(hash=False)
    raw_d: int
    d: int
    certificate: Certificate


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise ParameterError(f"parameter condition failed: {what}")


def _field_of(raw_d: int) -> int:
    if raw_d == 0 or is_square(raw_d):
        raise ExcludedField(f"raw d = {raw_d} is a perfect square")
    d, _ = squarefree_part(raw_d)
    if d in (1, -3):
        raise ExcludedField(f"raw d = {raw_d} gives the excluded field d = {d}")
    return d


def _kishi(fid: FamilyId, params: dict, raw_d: int, norm: int, trace: int, prime: Optional[int]) -> FamilyInstance:
    d = _field_of(raw_d)
    if gcd(norm, trace) != 1:
        raise CertificateError(f"gcd(N, T) = gcd({norm}, {trace}) != 1")
    t = kishi_trinomial(norm, trace)
    if prime is not None:
        if not is_irreducible_mod_p(t, prime):
            raise CertificateError(f"{t} is reducible mod {prime}")
    else:
        prime = irreducibility_prime(t)
    irreducible = is_irreducible_q(t)
    if not irreducible:
        raise CertificateError(f"{t} has a rational root")
    ln = ln_totally_ramified(t.A, t.B)
    if ln.totally_ramified:
        raise CertificateError(f"3 is totally ramified for {t} ({ln.value})")
    D = mirror_d(d)
    alpha_field, _ = squarefree_part(trace * trace - 4 * norm)
    if alpha_field != D:
        raise CertificateError(f"alpha lies in Q(sqrt({alpha_field})), expected the mirror field {D}")
    cert = KishiCertificate(norm, trace, t, prime, irreducible, ln, D, alpha_field)
    return FamilyInstance(fid, params, raw_d, d, cert)


def gen_thm2_1(m: int, n: int, k: int) -> FamilyInstance:
    _require(m > 0 and m % 2 == 1, "m odd positive")
    _require(m % 3 == 0, "m = 0 (mod 3)")
    _require(n >= 1, "n >= 1")
    _require(k % 18 in (1, 17), "k = +-1 (mod 18)")
    _require(gcd(m, k) == 1, "gcd(m, k) = 1")
    raw_d = 3 * (4 * m ** (3 * n) - k * k)
    return _kishi(FamilyId.Thm2_1, {"m": m, "n": n, "k": k}, raw_d, m ** (3 * n), k, 2)


def _sign_value(sign: Union[str, int]) -> int:
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", -1, "minus"):
        return -1
    raise ParameterError(f"sign must be '+' or '-', got {sign!r}")


def gen_thm2_2(m: int, n: int, sign: Union[str, int] = "+") -> FamilyInstance:
    s = _sign_value(sign)
    _require(m > 0 and m % 2 == 1, "m odd positive")
    _require(m % 3 == 0, "m = 0 (mod 3)")
    _require(n > 0 and n % 2 == 1, "n odd positive")
    _require(valuation(3, n) == 1, "v3(n) = 1")
    num = m * m * n * n + s * 4 * n
    if num % 3:
        raise CertificateError(f"m^2 n^2 +- 4n = {num} is not divisible by 3")
    raw_d = -num // 3
    params = {"m": m, "n": n, "sign": "+" if s > 0 else "-"}
    return _kishi(FamilyId.Thm2_2, params, raw_d, 1, m * m * n + 2 * s, 2)


def gen_thm2_3(m: int, n: int, p: int, r: int) -> FamilyInstance:
    _require(m > 1 and m % 2 == 1, "m > 1 odd")
    _require(p > 0 and p % 2 == 1, "p odd positive")
    _require(n >= 1, "n >= 1")
    _require(r in (-2, 4), "r in {-2, 4}")
    x = 3**m * p ** (2 * n)
    raw_d = -(x + r)
    params = {"m": m, "n": n, "p": p, "r": r}
    if r == 4:
        return _kishi(FamilyId.Thm2_3, params, raw_d, 1, x + 2, 2)
    # the r = -2 trace is even, so the trinomial always splits mod 2
    return _kishi(FamilyId.Thm2_3, params, raw_d, 1, 2 * (x - 1), None)


def gen_thm2_4(a: int, b: int, n: int) -> FamilyInstance:
    _require(a % 30 == 19, "a = 19 (mod 30)")
    _require(b % 15 == 6, "b = 6 (mod 15)")
    _require(gcd(a, b) == 1, "gcd(a, b) = 1")
    _require(n > 1 and n % 2 == 1, "n > 1 odd")
    raw_d = 3 * (a ** (3 * n) - b ** (2 * n))
    return _kishi(FamilyId.Thm2_4, {"a": a, "b": b, "n": n}, raw_d, a ** (3 * n), 2 * b**n, 5)


def gen_thm2_5(a: int, b: int, n: int) -> FamilyInstance:
    _require(gcd(a, b) == 1, "gcd(a, b) = 1")
    _require(a % 3 == 1 and a % 2 == 1, "a = 1 (mod 3) and odd")
    _require(b % 3 == 0 and b % 2 == 1, "b = 0 (mod 3) and odd")
    _require(n > 1, "n > 1")
    raw_d = 3 * (4 * a ** (3 * n) - b ** (2 * n))
    return _kishi(FamilyId.Thm2_5, {"a": a, "b": b, "n": n}, raw_d, a ** (3 * n), b**n, 2)


def _km(fid: FamilyId, params: dict, raw_d: int, u: int, v: int, prime: int, ratio: int) -> FamilyInstance:
    d = _field_of(raw_d)
    report = km_check(u, v)
    if not report.passes:
        raise CertificateError(f"KM conditions fail for (u, v) = ({u}, {v}): {report}")
    if report.km4 != "b":
        raise CertificateError(f"expected KM-4 branch (b), got {report.km4}")
    if not is_irreducible_mod_p(km_polynomial(u, v), prime):
        raise CertificateError(f"f_{{{u},{v}}} is reducible mod {prime}")
    if report.disc != ratio * raw_d:
        raise CertificateError(f"discriminant {report.disc} != {ratio} * {raw_d}")
    if report.d_field is not None and report.d_field != d:
        raise CertificateError(f"Q(sqrt(disc)) has d = {report.d_field}, expected {d}")
    return FamilyInstance(fid, params, raw_d, d, KmCertificate(report, prime, ratio))


def gen_thm3_1I(m: int) -> FamilyInstance:
    _require(m > 0 and m % 2 == 1, "m odd positive")
    _require(m % 3 == 0, "m = 0 (mod 3)")
    raw_d = -3 * (4 * m**3 + 1)
    return _km(FamilyId.Thm3_1I, {"m": m}, raw_d, -1, 3 * m, 2, 9)


def gen_thm3_1II(m: int, n: int) -> FamilyInstance:
    _require(m > 0 and m % 2 == 1, "m odd positive")
    _require(m % 15 == 4, "m = 4 (mod 15)")
    _require(n >= 3 and n % 2 == 1, "n >= 3 odd")
    raw_d = 3 * (2 * m ** (3 * n) - 1)
    return _km(FamilyId.Thm3_1II, {"m": m, "n": n}, raw_d, 2, 3 * m**n, 5, 144)


def cube_obstruction(m: int) -> bool:
    """True iff 2(1 + t sqrt(d')) is not (a + b sqrt(d'))^3 for integers a, b, where 1 - 2m^3 = t^2 d'.

    Cubing gives 2 = a^3 + 3ab^2 d' and 2t = 3a^2 b + b^3 d', so a divides 2;
    each a then fixes b^2, leaving a finite check.
    """
    _require(m > 1 and m % 2 == 1, "m > 1 odd")
    d_prime, t = squarefree_part(1 - 2 * m**3)
    for a in (1, -1, 2, -2):
        num, den = 2 - a**3, 3 * a * d_prime
        if num % den:
            continue
        b2 = num // den
        if b2 < 0 or not is_square(b2):
            continue
        b = isqrt(b2)
        for bb in {b, -b}:
            if a**3 + 3 * a * bb * bb * d_prime == 2 and 3 * a * a * bb + bb**3 * d_prime == 2 * t:
                return False
    return True


def gen_thm3_2(m: int) -> FamilyInstance:
    _require(m > 1 and m % 2 == 1, "m > 1 odd")
    raw_d = 1 - 2 * m**3
    d = _field_of(raw_d)
    d_prime, t = squarefree_part(raw_d)
    primes = tuple(factorize(m).primes())
    if any(kronecker(d, p) != 1 for p in primes):
        raise CertificateError(f"some prime of m = {m} does not split in Q(sqrt({d}))")
    if not cube_obstruction(m):
        raise CertificateError(f"2 alpha is a cube for m = {m}")
    return FamilyInstance(FamilyId.Thm3_2, {"m": m}, raw_d, d, CubeCertificate(d_prime, t, primes, True))


GENERATORS: dict[FamilyId, tuple[Callable[..., FamilyInstance], tuple[str, ...]]] = {
    FamilyId.Thm2_1: (gen_thm2_1, ("m", "n", "k")),
    FamilyId.Thm2_2: (gen_thm2_2, ("m", "n", "sign")),
    FamilyId.Thm2_3: (gen_thm2_3, ("m", "n", "p", "r")),
    FamilyId.Thm2_4: (gen_thm2_4, ("a", "b", "n")),
    FamilyId.Thm2_5: (gen_thm2_5, ("a", "b", "n")),
    FamilyId.Thm3_1I: (gen_thm3_1I, ("m",)),
    FamilyId.Thm3_1II: (gen_thm3_1II, ("m", "n")),
    FamilyId.Thm3_2: (gen_thm3_2, ("m",)),
}


def generate(family: FamilyId, **params) -> FamilyInstance:
    fn, names = GENERATORS[family]
    missing = [n for n in names if n not in params]
    if missing:
        raise ParameterError(f"{family.value} needs parameters {missing}")
    extra = set(params) - set(names)
    if extra:
        raise ParameterError(f"{family.value} does not take parameters {sorted(extra)}")
    return fn(**params)


def verify_divisibility(
    inst: FamilyInstance, real_cutoff: int = REAL_CUTOFF, imag_cutoff: int = IMAG_CUTOFF
) -> Optional[tuple[int, bool]]:
    """(h, 3 | h) for the instance's field, or None when the field is beyond the size cutoffs."""
    try:
        h = class_number(inst.d, real_cutoff, imag_cutoff).h
    except DiscriminantTooLarge:
        return None
    return h, h % 3 == 0
