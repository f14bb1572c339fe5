import math

import numpy as np
import pytest

import oracles
from greenlab.quadrature import (StencilSpec, basis_fit_residual, fd_residual,
                                 integrate, integrate_radial, probe_divergence,
                                 probe_tail, sphere_surface_area)


def _vec(f):
    f.vectorized = True
    return f


def test_polynomial_exact():
    res = integrate(_vec(lambda y: np.asarray(y) ** 3), (0.0, 1.0), tol=1e-12)
    assert float(res.value) == pytest.approx(0.25, abs=1e-14)


def test_log_endpoint_singularity():
    res = integrate(_vec(lambda y: -np.log(np.asarray(y))), (0.0, 1.0),
                    singular_points=(0.0,), tol=1e-10)
    assert float(res.value) == pytest.approx(1.0, abs=1e-9)
    assert res.value.error_bound >= abs(float(res.value) - 1.0)


def test_algebraic_endpoint_singularity():
    res = integrate(_vec(lambda y: np.asarray(y) ** -0.5), (0.0, 1.0),
                    singular_points=(0.0,), tol=1e-9)
    assert float(res.value) == pytest.approx(2.0, abs=1e-8)


def test_divergent_integral_is_certified():
    res = integrate(_vec(lambda y: 1.0 / np.asarray(y)), (0.0, 1.0),
                    singular_points=(0.0,), tol=1e-9)
    assert not res.value.is_finite
    cert = res.value.certificate
    assert cert.estimated_exponent == pytest.approx(-1.0, abs=0.05)
    assert cert.side == "right"


def test_breakpoints_resolve_kinks():
    res = integrate(_vec(lambda y: np.abs(np.asarray(y) - 0.3)), (0.0, 1.0),
                    tol=1e-12, breakpoints=(0.3,))
    exact = 0.5 * (0.3 ** 2 + 0.7 ** 2)
    assert float(res.value) == pytest.approx(exact, abs=1e-13)


def test_error_bounds_honest_on_smooth_mixtures():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b, c = rng.uniform(0.1, 2.0, 3)

        def f(y, a=a, b=b, c=c):
            y = np.asarray(y, dtype=float)
            return a + b * y + c * (1.0 + np.sin(3.0 * y))

        exact = a + b / 2.0 + c * (1.0 + (1.0 - math.cos(3.0)) / 3.0)
        prev_err = math.inf
        for tol in (1e-5, 1e-7, 1e-9):
            res = integrate(_vec(f), (0.0, 1.0), tol=tol)
            err = abs(float(res.value) - exact)
            assert err <= tol
            assert err <= res.value.error_bound + 1e-15
            assert err <= prev_err + tol
            prev_err = err


def test_error_bounds_honest_on_pure_powers():
    rng = np.random.default_rng(5)
    for _ in range(8):
        a = rng.uniform(0.1, 3.0)
        p = rng.uniform(-0.9, -0.1)

        def f(y, a=a, p=p):
            return a * np.asarray(y, dtype=float) ** p

        exact = a / (p + 1.0)
        prev_err = math.inf
        for tol in (1e-6, 1e-8, 1e-10):
            res = integrate(_vec(f), (0.0, 1.0), singular_points=(0.0,),
                            tol=tol)
            err = abs(float(res.value) - exact)
            assert err <= tol
            assert err <= res.value.error_bound + 1e-15
            assert err <= prev_err + tol
            prev_err = err


def test_sign_change_near_singularity_is_refused():
    from greenlab.errors import PreconditionError

    def f(y):
        y = np.asarray(y, dtype=float)
        return y ** -0.5 - 40.0 * y

    with pytest.raises(PreconditionError):
        integrate(_vec(f), (0.0, 1.0), singular_points=(0.0,), tol=1e-9)


def test_power_family_verdicts():
    for p, want in ((-1.5, True), (-1.25, True), (-1.0, True),
                    (-0.9, False), (-0.5, False)):
        rep = probe_divergence(_vec(lambda y, p=p: np.asarray(y) ** p),
                               0.0, side="right")
        assert rep.divergent is want
        assert rep.estimated_exponent == pytest.approx(p, abs=0.05)


def test_tail_verdicts():
    grows = probe_tail(_vec(lambda y: 1.0 / np.asarray(y)), start=1.0)
    decays = probe_tail(_vec(lambda y: np.asarray(y) ** -2.0), start=1.0)
    assert grows.divergent
    assert not decays.divergent
    assert grows.estimated_exponent == pytest.approx(-1.0, abs=0.05)
    assert decays.estimated_exponent == pytest.approx(-2.0, abs=0.05)


def test_sphere_surface_area():
    assert sphere_surface_area(5) == pytest.approx(oracles.sphere_area(5),
                                                   rel=1e-12)
    assert sphere_surface_area(6) == pytest.approx(oracles.sphere_area(6),
                                                   rel=1e-12)


def test_integrate_radial_exponential_profile():
    # weight sigma_4 s^4 against exp(-s): sigma_4 * Gamma(5) = sigma_4 * 24
    res = integrate_radial(_vec(lambda s: np.exp(-np.asarray(s))), 5,
                           upper=None, tol=1e-10)
    assert float(res.value) == pytest.approx(oracles.sphere_area(5) * 24.0,
                                             rel=1e-6)


def test_integrate_radial_certifies_fat_tail():
    res = integrate_radial(_vec(lambda s: 1.0 / (1.0 + np.asarray(s)) ** 5),
                           5, upper=None, tol=1e-8)
    assert not res.value.is_finite
    assert res.value.certificate.side == "radial-tail"


def test_integrate_radial_rejects_low_dimension():
    from greenlab.errors import ModelDomainError
    with pytest.raises(ModelDomainError):
        integrate_radial(_vec(lambda s: np.exp(-np.asarray(s))), 4)


def test_stencils_on_polynomials():
    product = StencilSpec("second", form="product_second", weight=None)
    # u = x^2: u'' = 2, centered difference is exact for quadratics
    assert fd_residual(product, lambda x: x * x, 0.4, h=1e-3) \
        == pytest.approx(2.0, abs=1e-7)
    flux = StencilSpec("weighted", form="flux", weight=lambda x: x ** 3)
    # (x^3 u')' / x^3 with u = x^2: (2 x^4)' / x^3 = 8 x^3 / x^3 ... = 8
    assert fd_residual(flux, lambda x: x * x, 0.5, h=1e-3) \
        == pytest.approx(8.0, abs=1e-6)


def test_basis_fit_residual_detects_span_membership():
    basis = (lambda x: 1.0, lambda x: 1.0 / x ** 2)
    inside = lambda x: 3.0 - 2.0 / x ** 2
    outside = lambda x: math.log(x)
    assert abs(basis_fit_residual(basis, inside, 0.4, delta=0.02)) < 1e-12
    assert abs(basis_fit_residual(basis, outside, 0.4, delta=0.02)) > 1e-6
