from fractions import Fraction

import mpmath
import pytest

from wqt.classical import PBParams, f_coefficients, poisson_coeff, sample_point, verify_classical_limit
from wqt.scalar import ZERO, qint


def test_poisson_coefficients():
    assert poisson_coeff(1, 1, 2) == -qint(1) ** 2 / qint(2)
    assert poisson_coeff(2, 3, 4) == qint(2)       # [m][m/2]/[m]
    for m in range(1, 6):
        assert poisson_coeff(2, 2, m) == ZERO
        assert poisson_coeff(1, 3, m) == -poisson_coeff(3, 1, -m)
    with pytest.raises(ValueError):
        poisson_coeff(0, 1, 1)
    with pytest.raises(ValueError):
        poisson_coeff(1, 1, 0)


def test_sample_point_is_exact_in_r():
    r, x = sample_point(4.0, 1e-2)
    assert r == Fraction(100, 99)
    assert abs(x ** (2 * mpmath.mpf(100) / 99) - 4) < mpmath.mpf(10) ** -10
    _, y = sample_point(4.0, 1e-2, "q=x^-2r")
    assert abs(x * y - 1) < mpmath.mpf(10) ** -10


def test_f_coefficients_start_at_one():
    r, x = sample_point(4.0, 1e-3)
    fc = f_coefficients(1, 1, 3, x, r, 30)
    assert fc[0] == 1
    assert abs(fc[1]) < 1


@pytest.mark.parametrize("kw", [dict(q0=1.0), dict(q0=-2.0), dict(betas=()), dict(betas=(1e-3, 1e-2)),
                                dict(betas=(0.7,)), dict(convention="q=x")])
def test_parameter_validation(kw):
    with pytest.raises(ValueError):
        PBParams(**kw)


def test_small_run_structure():
    rep = verify_classical_limit(PBParams(betas=(1e-2, 1e-3), imax=2, mmax=3))
    names = [c.name for c in rep.checks]
    assert any(n.startswith("c(r,x)") for n in names)
    assert set(rep.data) >= {"c", "f_orders", "K_needed"}
    # exact properties of C hold regardless of the numeric tolerance
    for c in rep.checks:
        if c.name.startswith("C_"):
            assert c.passed


def test_inverse_convention_fixes_the_sign():
    rep = verify_classical_limit(PBParams(betas=(1e-2, 1e-3, 1e-4), imax=1, mmax=2, convention="q=x^-2r"))
    assert [c for c in rep.checks if c.name.startswith("c(r,x)")][0].passed
    ratios = [float(v) for v in rep.data["c"]["ratios"]]
    assert all(abs(v + 1) < 0.02 for v in ratios)
