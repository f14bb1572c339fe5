"""The transpose coupling: mirrored quadrature, the gate, and regularity."""

import math

import numpy as np
import pytest

import oracles
from greenlab.adjoint import (
    _moduli_consistent,
    adjoint_apply,
    adjoint_gate_check,
    adjoint_identity_residual,
    continuity_probe,
    duality_residual,
    lsc_check,
)
from greenlab.coupling import coupling_apply
from greenlab.errors import ModelDomainError, PreconditionError
from greenlab.kernels import Fn, bump
from greenlab.models import get_model


def test_adjoint_of_kernel_slices_matches_h_oracle():
    model = get_model("interval")
    for y, x in ((0.5, 0.5), (0.3, 0.7), (0.7, 0.3), (0.2, 0.9)):
        val = adjoint_apply(model, model.G1.slice_in_first(y), x, tol=1e-11)
        assert val.is_finite
        assert float(val) == pytest.approx(oracles.interval_h(y, x), abs=1e-9)


def test_radial_adjoint_is_the_forward_coupling():
    model = get_model("newtonian5")
    f = Fn(lambda r: np.exp(-np.asarray(r, dtype=float)), vectorized=True)
    lhs = adjoint_apply(model, f, 0.0, tol=1e-9)
    rhs = coupling_apply(model, f, 0.0, tol=1e-9)
    assert float(lhs) == float(rhs)


def test_divergence_certificate_is_unmirrored():
    model = get_model("interval")
    val = adjoint_apply(model, bump(0.0, 0.3), 0.0)
    assert not val.is_finite
    cert = val.certificate
    assert cert.location == pytest.approx(0.0, abs=1e-12)
    assert cert.side == "right"
    assert cert.estimated_exponent == pytest.approx(-1.0, abs=0.05)


def test_gate_blocks_test_functions_charging_the_origin():
    model = get_model("interval")
    rep = adjoint_gate_check(model, bump(0.0, 0.3), (0.0, 0.3, 0.6))
    assert not rep.passed
    assert rep.witness == 0.0
    assert rep.certificate is not None
    assert "diverges" in rep.detail


def test_gate_passes_where_the_adjoint_is_regular():
    model = get_model("bilaplace")
    rep = adjoint_gate_check(model, bump(0.5, 0.3), (0.25, 0.5, 0.75))
    assert rep.passed
    assert all(v.is_finite for v in rep.values)
    assert rep.witness is None


def test_interchange_identity_finite_cases():
    for name, pairs in (("interval", ((0.4, 0.6), (0.2, 0.3), (0.8, 0.5))),
                        ("bilaplace", ((0.4, 0.6), (0.25, 0.75), (0.5, 0.2)))):
        model = get_model(name)
        for x, y in pairs:
            rep = adjoint_identity_residual(model, x, y)
            assert rep.kind == "finite"
            assert rep.residual <= 1e-6
            assert rep.passed()


def test_interchange_identity_survives_divergence():
    model = get_model("interval")
    rep = adjoint_identity_residual(model, 0.0, 0.3)
    assert rep.kind == "consistent-divergence"
    assert rep.passed()
    assert not rep.lhs.is_finite and not rep.rhs.is_finite


def test_continuity_probe_consistent_off_diagonal():
    assert continuity_probe(get_model("interval"), 0.3, 0.6).consistent
    # a target with a nearby critical point: coarse moduli may rise, the
    # refined tail must still decide in favour of continuity
    rep = continuity_probe(get_model("bilaplace"), 0.7905, 0.5332)
    assert rep.verdict == "consistent"


def test_continuity_probe_reports_boundary_blowup():
    rep = continuity_probe(get_model("interval"), 0.5, 0.0)
    assert rep.verdict == "blow-up"
    assert rep.target_value is not None and not rep.target_value.is_finite
    assert rep.moduli == ()
    assert not rep.consistent


def test_continuity_probe_refuses_the_diagonal():
    with pytest.raises(PreconditionError):
        continuity_probe(get_model("interval"), 0.4, 0.4)


def test_oscillation_rule_unit_cases():
    assert _moduli_consistent([])
    assert _moduli_consistent([1e-3 * 0.5 ** k for k in range(6)])
    # a genuine jump stalls the sequence and fails the shrink test
    assert not _moduli_consistent([0.5, 0.31, 0.3, 0.3, 0.3, 0.3])
    # a rising refined tail fails outright
    assert not _moduli_consistent([1e-3, 4e-4, 2e-4, 3e-4])
    # a coarse-level rise is forgiven when refinement settles it
    assert _moduli_consistent([3.6e-5, 5.5e-5, 2e-5, 8e-6, 3e-6, 1e-6])
    # noise-floor wiggle is not a discontinuity
    assert _moduli_consistent([5e-7, 8e-7, 3e-7])


def test_lsc_grid_check():
    report = lsc_check(get_model("interval"))
    assert report.passed
    assert not report.failures
    assert len(report.entries) == 15 * 15
    with pytest.raises(ModelDomainError):
        lsc_check(get_model("newtonian5"))


def test_duality_pairing():
    model = get_model("bilaplace")
    res = duality_residual(model, bump(0.3, 0.2), bump(0.7, 0.2))
    assert res <= 2e-6
    with pytest.raises(ModelDomainError):
        duality_residual(get_model("interval"), bump(0.3, 0.2),
                         bump(0.7, 0.2))
