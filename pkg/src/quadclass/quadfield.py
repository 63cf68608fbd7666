"""Square-free kernels, fundamental discriminants and the d <-> D mirror."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_squarefree, squarefree_part


class NotAQuadraticField(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """Q(sqrt(d)) for square-free d, with its fundamental discriminant."""

    d: int
    delta: int

    @property
    def is_real(self) -> bool:
        return self.d > 0


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def is_fundamental(delta: int) -> bool:
    if delta in (0, 1):
        return False
    if delta % 4 == 1:
        return is_squarefree(delta)
    if delta % 4 == 0:
        m = delta // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def field_from(n: int) -> FieldSpec:
    if n == 0:
        raise NotAQuadraticField("0 does not define a quadratic field")
    d, _ = squarefree_part(n)
    if d == 1:
        raise NotAQuadraticField(f"{n} is a perfect square, not a quadratic field")
    return FieldSpec(d, fundamental_discriminant(d))


def field_from_delta(delta: int) -> FieldSpec:
    if not is_fundamental(delta):
        raise NotAQuadraticField(f"{delta} is not a fundamental discriminant")
    return FieldSpec(delta if delta % 4 == 1 else delta // 4, delta)


def mirror_d(d: int) -> int:
    """The companion field: -d/3 when 3 divides d, else -3d."""
    if d in (1, -3):
        raise ValueError(f"d = {d} is excluded")
    if not is_squarefree(d):
        raise ValueError(f"{d} is not square-free")
    D = -d // 3 if d % 3 == 0 else -3 * d
    assert is_squarefree(D), (d, D)
    return D
