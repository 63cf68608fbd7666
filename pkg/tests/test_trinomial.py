import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Poly, divisors, symbols

from quadclass.arith import squarefree_part
from quadclass.trinomial import (
    CubicTrinomial,
    LemmaHypothesisError,
    LnOutcome,
    cubic_discriminant,
    irreducibility_prime,
    is_irreducible_mod_p,
    is_irreducible_q,
    kishi_trinomial,
    km_check,
    km_polynomial,
    ln_totally_ramified,
    rational_root,
)

X = symbols("X")


def divisor_roots(t):
    """Integer roots by testing every divisor of B (rational root theorem)."""
    if t.B == 0:
        return {0} | {r for r in range(-abs(t.A) - 1, abs(t.A) + 2) if t(r) == 0}
    return {s * q for q in divisors(abs(t.B)) for s in (1, -1) if t(s * q) == 0}


def test_kishi_trinomial_examples():
    assert kishi_trinomial(27, 1) == CubicTrinomial(9, 1)
    assert str(kishi_trinomial(27, 1)) == "X^3 - 9X - 1"
    assert kishi_trinomial(1, 29) == CubicTrinomial(3, 29)
    assert kishi_trinomial(1, 0) == CubicTrinomial(3, 0)
    assert kishi_trinomial(-8, 1) == CubicTrinomial(-6, 1)
    with pytest.raises(ValueError):
        kishi_trinomial(2, 1)


def test_km_polynomial_examples():
    assert km_polynomial(-1, 9) == CubicTrinomial(-9, 1)
    assert str(km_polynomial(-1, 9)) == "X^3 + 9X - 1"
    assert km_polynomial(2, 3 * 19**3) == CubicTrinomial(6 * 19**3, 4)
    assert km_polynomial(1, 0) == CubicTrinomial(0, 1)


def test_cubic_discriminant_examples():
    assert cubic_discriminant(km_polynomial(-1, 9)) == -2943 == 9 * -327
    assert cubic_discriminant(km_polynomial(2, 3 * 19**3)) == 144 * 3 * (2 * 19**9 - 1)
    assert cubic_discriminant(CubicTrinomial(0, 0)) == 0


def test_discriminant_agrees_with_sympy():
    for A, B in [(9, 1), (-9, 1), (3, 29), (1234, -77), (0, 5)]:
        assert cubic_discriminant(CubicTrinomial(A, B)) == Poly(X**3 - A * X - B).discriminant()


def test_km_discriminant_identity():
    for u in range(-100, 101):
        for v in range(-100, 101):
            assert cubic_discriminant(km_polynomial(u, v)) == u**3 * (4 * v**3 - 27 * u)


def test_irreducible_q_examples():
    assert is_irreducible_q(CubicTrinomial(9, 1))
    assert not is_irreducible_q(CubicTrinomial(3, 0))
    assert not is_irreducible_q(CubicTrinomial(3, 2))
    assert rational_root(CubicTrinomial(3, 2)) in (2, -1)


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_rational_root_against_divisor_search(A, B):
    t = CubicTrinomial(A, B)
    roots = divisor_roots(t)
    r = rational_root(t)
    if roots:
        assert r in roots
    else:
        assert r is None


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))
def test_irreducible_q_against_sympy(A, B):
    assert is_irreducible_q(CubicTrinomial(A, B)) == Poly(X**3 - A * X - B).is_irreducible


@given(st.integers(-1000, 1000), st.integers(-1000, 1000), st.sampled_from([2, 3, 5, 7]))
def test_mod_p_irreducible_lifts(A, B, p):
    t = CubicTrinomial(A, B)
    if is_irreducible_mod_p(t, p):
        assert is_irreducible_q(t)


def test_mod_p_examples():
    assert is_irreducible_mod_p(CubicTrinomial(9, 1), 2)
    assert is_irreducible_mod_p(CubicTrinomial(3, 3**3 * 9 + 2), 2)
    a, b, n = 19, 6, 3
    t = CubicTrinomial(3 * a**n, 2 * b**n)
    assert is_irreducible_mod_p(t, 5)
    assert is_irreducible_mod_p(CubicTrinomial(-3, 2), 5)  # X^3 + 3X - 2
    assert irreducibility_prime(CubicTrinomial(3, 0)) is None


def test_ln_examples():
    assert ln_totally_ramified(9, 1) is LnOutcome.NOT_TOTALLY_RAMIFIED
    assert ln_totally_ramified(3, 1) is LnOutcome.LN3
    assert ln_totally_ramified(3, 3) is LnOutcome.LN1
    assert ln_totally_ramified(6, 1) is LnOutcome.LN2
    assert not LnOutcome.NOT_TOTALLY_RAMIFIED.totally_ramified
    assert LnOutcome.LN2.totally_ramified


def test_ln_hypotheses_enforced():
    with pytest.raises(LemmaHypothesisError):
        ln_totally_ramified(3, 2)  # root 2
    with pytest.raises(LemmaHypothesisError):
        ln_totally_ramified(9 * 5, 27 * 2)  # v3(a)=2 and v3(b)=3


def test_km_check_examples():
    r = km_check(-1, 9)
    assert r.passes and r.km4 == "b" and r.d_field == -327
    r = km_check(2, 3 * 19**3)
    assert r.passes and r.km4 == "b"
    assert r.d_field == squarefree_part(144 * 3 * (2 * 19**9 - 1))[0]
    r = km_check(2, 4)
    assert not r.km1 and not r.passes


def test_km_conditions_hold_for_first_family():
    for m in range(3, 100, 6):
        r = km_check(-1, 3 * m)
        assert r.passes, m
        assert r.disc == 9 * (-3 * (4 * m**3 + 1))


def test_km_branch_a_and_c():
    assert km_check(1, 2).km4 == "a"
    # u v = 3 (mod 9) with u = v + 1 (mod 27): u = 28, v = 27 * k + ... pick by search
    hits = [(u, v) for u in range(-40, 41) for v in range(3, 60, 3) if km_check(u, v).km4 == "c"]
    assert hits
    for u, v in hits:
        assert (u * v) % 9 == 3 and ((u - v - 1) % 27 == 0 or (u - v + 1) % 27 == 0)
