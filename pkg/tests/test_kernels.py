import math

import numpy as np
import pytest

import oracles
from greenlab.errors import ConfigError, PreconditionError
from greenlab.kernels import (BiharmonicPair, Fn, GridFunction, Interval1D,
                              bump, constant, is_grid_function, kernel_eval)
from greenlab.models import MODEL_NAMES, get_model


def test_interval_domain_membership():
    dom = Interval1D(0.0, 1.0, include_lo=True)
    assert dom.require(0.0) == 0.0
    assert dom.require(0.5) == 0.5
    with pytest.raises(Exception):
        dom.require(1.0)
    with pytest.raises(Exception):
        dom.require(-0.1)


def test_interior_grid_stays_inside():
    dom = Interval1D(0.0, 1.0, include_lo=True)
    grid = dom.interior_grid(17)
    assert len(grid) == 17
    assert grid[0] > 0.0 and grid[-1] < 1.0
    assert np.all(np.diff(grid) > 0)


def test_bump_shape_and_support():
    f = bump(0.4, 0.2)
    assert float(f(0.4)) == 1.0
    assert float(f(0.2)) == 0.0
    assert float(f(0.9)) == 0.0
    assert float(f(0.5)) == pytest.approx(0.5)
    assert f.support == (pytest.approx(0.2), pytest.approx(0.6))
    with pytest.raises(PreconditionError):
        bump(0.5, 0.0)


def test_constant_and_fn_metadata():
    one = constant(1.0)
    assert float(one(0.3)) == 1.0
    g = Fn(lambda y: np.asarray(y) ** 2, breakpoints=(0.5,),
           vectorized=True, singular_points=(0.0,))
    assert g.breakpoints == (0.5,)
    assert g.singular_points == (0.0,)
    assert float(g(3.0)) == 9.0


def test_grid_function_interpolates_and_flags():
    gf = GridFunction([0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
    assert is_grid_function(gf)
    assert not is_grid_function(constant(1.0))
    assert float(gf(0.25)) == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        GridFunction([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])


def test_interval_kernels_match_closed_forms():
    model = get_model("interval")
    for x, y in ((0.3, 0.7), (0.7, 0.3), (0.5, 0.5), (0.0, 0.4)):
        assert float(model.G1.raw(x, y)) == pytest.approx(
            oracles.interval_g1(x, y), abs=1e-14)
        assert float(model.G2.raw(x, y)) == pytest.approx(
            oracles.interval_g2(x, y), abs=1e-14)


def test_kernel_slices_declare_live_singularities():
    model = get_model("interval")
    s = model.G2.slice_in_first(0.0)  # y -> G2(y, 0) blows up at y = 0
    assert 0.0 in s.singular_points
    s_mid = model.G2.slice_in_first(0.5)  # finite at the origin
    assert 0.0 not in s_mid.singular_points
    assert 0.5 in s_mid.breakpoints


def test_kernel_eval_certifies_endpoint_hit():
    model = get_model("interval")
    val = kernel_eval(model.G1, 0.0, 0.0)
    assert not val.is_finite
    assert val.certificate.side == "right"
    fin = kernel_eval(model.G1, 0.2, 0.6)
    assert float(fin) == pytest.approx(oracles.interval_g1(0.2, 0.6))


def test_measure_weighting():
    model = get_model("interval")
    g = model.mu.weighted(constant(2.0))
    ys = np.array([0.1, 0.5, 0.9])
    assert np.allclose(g(ys), 2.0 * ys)


def test_model_registry():
    assert set(MODEL_NAMES) == {"interval", "bilaplace", "newtonian5",
                                "newtonian6"}
    assert get_model("bilaplace1d").id == "bilaplace1d"
    assert get_model("newtonian7").dim == 7
    with pytest.raises(ConfigError):
        get_model("newtonian4")
    with pytest.raises(ConfigError):
        get_model("torus")


def test_radial_models_are_flagged():
    assert not get_model("interval").is_radial
    assert not get_model("bilaplace").is_radial
    assert get_model("newtonian5").is_radial


def test_pair_flags_are_frozen():
    pair = BiharmonicPair(constant(1.0), constant(0.0))
    assert pair.flags == frozenset()
    tagged = pair.with_flags({"hyperharmonic"}, "test provenance")
    assert tagged.flags == frozenset({"hyperharmonic"})
    assert tagged.provenance == "test provenance"
