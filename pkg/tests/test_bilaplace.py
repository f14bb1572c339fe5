"""The clamped-plate model, where everything is finite and symmetric."""

import numpy as np
import pytest

import oracles
from greenlab.errors import PreconditionError
from greenlab.models.bilaplace import (
    bilaplace_model,
    global_pure_pair,
    h_closed_form,
    h_sym,
    navier_check,
)
from greenlab.riquier import biharmonic_measures, regular_subdomain


def test_closed_form_agrees_with_reference():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y = rng.uniform(0.0, 1.0, 2)
        assert h_closed_form(x, y) == pytest.approx(
            oracles.bilaplace_h(x, y), rel=1e-13, abs=1e-15)


def test_closed_form_domain_check():
    with pytest.raises(PreconditionError):
        h_closed_form(-0.1, 0.5)
    with pytest.raises(PreconditionError):
        h_closed_form(0.5, 1.1)


def test_quadrature_h_matches_closed_form():
    rng = np.random.default_rng(4)
    for _ in range(10):
        x, y = rng.uniform(0.05, 0.95, 2)
        assert float(h_sym(x, y)) == pytest.approx(
            h_closed_form(x, y), abs=1e-10)


def test_center_value():
    assert oracles.BILAPLACE_H_CENTER == 1.0 / 48.0
    assert float(h_sym(0.5, 0.5)) == pytest.approx(
        oracles.BILAPLACE_H_CENTER, abs=1e-10)


def test_h_is_symmetric():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(8):
        x, y = rng.uniform(0.05, 0.95, 2)
        worst = max(worst, abs(float(h_sym(x, y)) - float(h_sym(y, x))))
    assert worst <= 1e-10


def test_navier_reading_of_h():
    rep = navier_check(0.5)
    assert rep.max_l1_residual <= 1e-3
    assert max(abs(v) for v in rep.boundary_values) <= 1e-6
    assert rep.third_jump == pytest.approx(
        oracles.BILAPLACE_THIRD_JUMP, abs=1e-2)
    assert rep.passed()


def test_navier_kink_must_be_interior():
    with pytest.raises(PreconditionError):
        navier_check(0.0)
    with pytest.raises(PreconditionError):
        navier_check(1.0)


def test_nu_masses_at_the_center():
    model = bilaplace_model()
    sub = regular_subdomain(model, 0.0, 1.0)
    triple = biharmonic_measures(model, sub, 0.5)
    for mass in triple.nu:
        assert mass == pytest.approx(oracles.BILAPLACE_NU_MASS, abs=1e-9)
    # both bases contain the constants, so the endpoint weights resolve 1
    assert sum(triple.mu) == pytest.approx(1.0, abs=1e-12)
    assert sum(triple.lam) == pytest.approx(1.0, abs=1e-12)


def test_global_pure_pair_closed_form():
    pair = global_pure_pair()
    for x in (0.1, 0.5, 0.9):
        assert float(pair.u(x)) == pytest.approx(
            oracles.bilaplace_v_one(x), abs=1e-12)
    assert {"pure", "hyperharmonic", "superharmonic"} <= pair.flags
