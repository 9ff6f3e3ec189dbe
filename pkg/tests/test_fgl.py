"""Honda formal group laws: logarithm, group law, inverse, [m]-series."""

from fractions import Fraction
from itertools import product

import pytest

from greenkernel.exactkernel import ExactKernelError, TruncPoly
from greenkernel.fgl import (
    Fgl,
    HondaParams,
    _fgl_rational_reference,
    formal_inverse,
    formal_sum,
    honda_exp_coeffs,
    honda_fgl,
    honda_log,
    m_series,
)


def level1_coproduct(p: int, n: int) -> dict:
    """Independent evaluation of the level-1 coproduct: the binomial
    expression x(x)1 + 1(x)x - sum (1/p) C(p,i) x^{i p^{n-1}} (x)
    x^{(p-i) p^{n-1}}, reduced mod p."""
    from math import comb

    out = {(1, 0): 1, (0, 1): 1}
    e = p ** (n - 1)
    for i in range(1, p):
        c = (-(comb(p, i) // p)) % p
        key = (i * e, (p - i) * e)
        out[key] = (out.get(key, 0) + c) % p
    return {k: v for k, v in out.items() if v}


def fgl_reduced_to_level1(p: int, n: int) -> dict:
    q = p ** n
    f = honda_fgl(HondaParams(p, n, q))
    return {e: c for e, c in f.F.coeffs.items()}


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_level1_coproduct_matches_binomial_formula(p, n):
    assert fgl_reduced_to_level1(p, n) == level1_coproduct(p, n)


def test_honda_log_examples():
    f = honda_log(HondaParams(2, 1, 5))
    assert f.coeffs == {(1,): Fraction(1), (2,): Fraction(1, 2), (4,): Fraction(1, 4)}
    f = honda_log(HondaParams(3, 1, 4))
    assert f.coeffs == {(1,): Fraction(1), (3,): Fraction(1, 3)}
    f = honda_log(HondaParams(2, 2, 5))
    assert f.coeffs == {(1,): Fraction(1), (4,): Fraction(1, 2)}


def test_exp_inverts_log():
    for (p, n, K) in [(2, 1, 16), (3, 1, 12), (2, 2, 10)]:
        q = p ** n
        exp = honda_exp_coeffs(p, q, K)
        # compose: log(exp(u)) must be u up to degree K
        log = honda_log(HondaParams(p, n, K + 1))
        g = TruncPoly(("x",), (K + 1,), {(k,): c for k, c in enumerate(exp) if c}, None)
        comp = log.substitute({"x": g})
        assert comp == TruncPoly(("x",), (K + 1,), {(1,): 1}, None)


def test_scaled_path_matches_rational_reference():
    for (p, n, D) in [(2, 1, 8), (3, 1, 9), (2, 2, 8), (5, 1, 6)]:
        fast = honda_fgl(HondaParams(p, n, D)).F
        slow = _fgl_rational_reference(HondaParams(p, n, D)).reduce_mod(p)
        assert fast == slow


@pytest.mark.parametrize("p,n,D", [(2, 1, 8), (3, 1, 9), (2, 2, 16)])
def test_unit_and_commutativity(p, n, D):
    f = honda_fgl(HondaParams(p, n, D))
    F = f.F
    # F(x, 0) = x and F(0, y) = y
    for (i, j), c in F.coeffs.items():
        if j == 0:
            assert (i, c) == (1, 1)
        if i == 0:
            assert (j, c) == (1, 1)
    # symmetry
    assert all(F.coeff((j, i)) == c for (i, j), c in F.coeffs.items())


@pytest.mark.parametrize("p,n,D", [(2, 1, 8), (3, 1, 9), (2, 2, 8)])
def test_associativity_within_truncation(p, n, D):
    f = honda_fgl(HondaParams(p, n, D))
    ring = (("x", "y", "z"), (D, D, D))
    x = TruncPoly.variable("x", *ring, modulus=p)
    y = TruncPoly.variable("y", *ring, modulus=p)
    z = TruncPoly.variable("z", *ring, modulus=p)
    def F(a, b):
        return f.F.substitute({"x": a, "y": b})
    assert F(F(x, y), z) == F(x, F(y, z))


def test_formal_inverse_property():
    for (p, n, D) in [(2, 1, 8), (3, 1, 9), (2, 2, 16)]:
        f = honda_fgl(HondaParams(p, n, D))
        inv = formal_inverse(f, D)
        x = TruncPoly(("x",), (D,), {(1,): 1}, p)
        assert formal_sum(f, x, inv).is_zero()


def test_m_series_examples():
    f2 = honda_fgl(HondaParams(2, 1, 4))
    x = TruncPoly(("x",), (4,), {(1,): 1}, 2)
    assert m_series(f2, 1, 4) == x
    assert m_series(f2, 2, 4) == TruncPoly(("x",), (4,), {(2,): 1}, 2)
    f3 = honda_fgl(HondaParams(3, 1, 9))
    assert m_series(f3, 3, 9) == TruncPoly(("x",), (9,), {(3,): 1}, 3)
    assert m_series(f3, 0, 9).is_zero()


def test_p_power_series_kills_q_power():
    # [p^r](x) = 0 mod x^{q^r}
    for (p, n) in [(2, 1), (3, 1), (2, 2)]:
        q = p ** n
        for r in (1, 2):
            D = q ** r
            f = honda_fgl(HondaParams(p, n, D))
            assert m_series(f, p ** r, D).is_zero()


def test_m_series_linear_term():
    f = honda_fgl(HondaParams(3, 1, 9))
    for m in range(-3, 4):
        s = m_series(f, m, 9)
        assert s.coeff((1,)) == m % 3


def test_m_series_multiplicativity():
    f = honda_fgl(HondaParams(2, 1, 8))
    for m1 in range(-3, 4):
        for m2 in range(-3, 4):
            lhs = m_series(f, m1 * m2, 8)
            inner = m_series(f, m2, 8)
            outer = m_series(f, m1, 8)
            comp = outer.substitute({"x": inner})
            assert comp == lhs, (m1, m2)


def test_negative_m_series_is_formal_inverse_composite():
    f = honda_fgl(HondaParams(3, 1, 9))
    s = m_series(f, -1, 9)
    assert s == formal_inverse(f, 9)


def test_fgl_requires_trunc_at_least_q():
    with pytest.raises(ExactKernelError):
        honda_fgl(HondaParams(2, 2, 3))


def test_params_validation():
    with pytest.raises(ExactKernelError):
        HondaParams(4, 1, 8)
    with pytest.raises(ExactKernelError):
        HondaParams(2, 0, 8)
    with pytest.raises(ExactKernelError):
        HondaParams(2, 1, 1)


def test_cache_serves_truncations():
    big = honda_fgl(HondaParams(2, 1, 16))
    small = honda_fgl(HondaParams(2, 1, 8))
    assert small.F.caps == (8, 8)
    for e, c in small.F.coeffs.items():
        assert big.F.coeff(e) == c


def test_all_fgl_coefficients_are_p_integral():
    # the rational pipeline asserts integrality internally; double-check on
    # the reference path where coefficients are explicit Fractions
    for (p, n, D) in [(2, 1, 8), (3, 1, 9)]:
        ref = _fgl_rational_reference(HondaParams(p, n, D))
        assert all(c.denominator % p for c in ref.coeffs.values())
