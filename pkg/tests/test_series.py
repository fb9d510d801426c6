import pytest

from wqt.exponent import E, R
from wqt.scalar import ONE, ZERO, xpow
from wqt.series import (FactoredRational, LaurentSeries, RepeatedPoleError, SeriesError, delta_decompose,
                        delta_mismatch, expand, pochhammer_log_coeff, pole_parts, principal_mismatch,
                        theta_log_coeff)

N = 8


def geometric(c, N=N):
    return LaurentSeries({k: c ** k for k in range(N + 1)}, N)


def test_exp_log_inverse():
    a = xpow(R)
    s = LaurentSeries({1: a, 2: ONE, 3: xpow(-1)}, N)
    assert s.exp().log() == s
    assert (s.exp() * (-s).exp()) == LaurentSeries.one(N)


def test_inverse_and_product():
    c = xpow(R - 1)
    g = geometric(c)
    one_minus = LaurentSeries({0: ONE, 1: -c}, N)
    assert g * one_minus == LaurentSeries.one(N)
    assert g.inv() == one_minus


def test_truncation_is_tracked():
    s = LaurentSeries({0: ONE}, 3)
    with pytest.raises(SeriesError):
        s.coeff(4)
    assert (s * LaurentSeries({0: ONE}, 6)).N == 3


def test_expand_zero_and_infinity():
    c = xpow(2)
    r = FactoredRational.factor(c, -1)          # 1/(1 - c zeta)
    assert expand(r, "zero", N) == geometric(c)
    u = expand(r, "infinity", N)               # -sum_{k>=1} c^-k zeta^-k
    assert u.coeff(0) == ZERO
    assert u.coeff(3) == -(c ** -3)


def test_delta_decomposition_simple_poles():
    a, b = xpow(R), xpow(-3)
    r = FactoredRational(xpow(1), 0, {a: -1, b: -1, xpow(5): 1})
    d = delta_decompose(r, check_window=10)
    assert set(d.terms) == {a, b}
    assert delta_mismatch(r, d, 10) is None


def test_delta_decomposition_rejects_double_pole():
    with pytest.raises(RepeatedPoleError):
        delta_decompose(FactoredRational.factor(xpow(1), -2))


def test_double_pole_principal_parts():
    c = xpow(R)
    r = FactoredRational(ONE, 0, {c: -2, xpow(3): 1})
    parts = {c: pole_parts(r, c)}
    assert principal_mismatch(r, parts, 10) is None
    wrong = {c: (parts[c][0], parts[c][1] + 1)}
    assert principal_mismatch(r, wrong, 10) is not None


def test_invert_matches_reversed_variable():
    r = FactoredRational(xpow(2), 1, {xpow(R): -1})
    # r(1/zeta) expanded at zero equals r expanded at infinity
    assert expand(r.invert(), "zero", N).c == expand(r, "infinity", N).c


def test_pochhammer_functional_equation():
    # (a zeta; p) = (1 - a zeta)(a p zeta; p)
    p, a = E(4), R - 1
    for m in range(1, N + 1):
        lhs = pochhammer_log_coeff(p, a, m) - pochhammer_log_coeff(p, a + p, m)
        assert lhs == -xpow(a * m) / m


def test_theta_pair():
    plus, minus = theta_log_coeff(E(4), E(1), 3)
    assert plus == pochhammer_log_coeff(4, 1, 3)
    assert minus == pochhammer_log_coeff(4, 3, 3)
    with pytest.raises(ValueError):
        pochhammer_log_coeff(-1, 0, 1)


def test_exp_of_log_series_of_one_minus_a():
    a = xpow(R - 1)
    s = LaurentSeries({m: -(a ** m) / m for m in range(1, N + 1)}, N)
    assert s.exp() == LaurentSeries({0: ONE, 1: -a}, N)


def test_delta_decomposition_of_delta1():
    from wqt.model import delta_rational
    from wqt.scalar import c_const, qint
    d = delta_decompose(delta_rational(1), check_window=8)
    pref = c_const() / qint(1)
    assert d.terms == {xpow(-1): pref, xpow(1): -pref}


def test_polynomial_has_empty_decomposition():
    r = FactoredRational(xpow(2), 0, {xpow(R): 2})
    assert delta_decompose(r, check_window=6).is_zero()


def test_residue_limit_simple():
    from wqt.series import residue_limit
    c = xpow(R)
    assert residue_limit(FactoredRational.factor(c, -1), c) == ONE
    assert residue_limit(FactoredRational.factor(c, 1), c) == ZERO
