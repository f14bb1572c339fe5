import math

import numpy as np
import pytest

import oracles
from greenlab.coupling import (classify_pair, compose_green, coupling_apply,
                               pure_decompose, w_apply)
from greenlab.errors import ClassificationError, PreconditionError
from greenlab.kernels import BiharmonicPair, Fn, GridFunction, bump, constant
from greenlab.models import get_model

GRID = [float(g) for g in np.linspace(0.05, 0.9, 12)]
SUBS = ((0.2, 0.8), (0.3, 0.6), (0.15, 0.45))


def test_v_of_one_matches_antiderivative():
    model = get_model("interval")
    for x in (0.0, 0.2, 0.5, 0.9):
        val = coupling_apply(model, constant(1.0), x, tol=1e-11)
        assert float(val) == pytest.approx(oracles.interval_v_one(x),
                                           abs=1e-10)


def test_v_of_one_bilaplace():
    model = get_model("bilaplace")
    for x in (0.25, 0.5, 0.75):
        val = coupling_apply(model, constant(1.0), x)
        assert float(val) == pytest.approx(oracles.bilaplace_v_one(x),
                                           abs=1e-10)


def test_compose_green_matches_oracles():
    mi, mb = get_model("interval"), get_model("bilaplace")
    rng = np.random.default_rng(11)
    for _ in range(15):
        x, y = rng.uniform(0.05, 0.95, 2)
        assert float(compose_green(mi, float(x), float(y))) == pytest.approx(
            oracles.interval_h(float(x), float(y)), abs=1e-10)
        assert float(compose_green(mb, float(x), float(y))) == pytest.approx(
            oracles.bilaplace_h(float(x), float(y)), abs=1e-12)


def test_compose_green_divergence_at_boundary():
    model = get_model("interval")
    val = compose_green(model, 0.5, 0.0)
    assert not val.is_finite
    assert val.certificate.estimated_exponent == pytest.approx(-1.0,
                                                               abs=0.05)


def test_coupling_monotone_in_data():
    model = get_model("interval")
    f = bump(0.5, 0.2)
    g = Fn(lambda y: f(y) + 0.3 * bump(0.4, 0.3)(y), vectorized=True)
    for x in (0.1, 0.5, 0.8):
        assert float(coupling_apply(model, f, x)) \
            <= float(coupling_apply(model, g, x)) + 1e-10


def test_coupling_linear_in_data():
    model = get_model("bilaplace")
    rng = np.random.default_rng(7)
    f, g = bump(0.3, 0.25), bump(0.7, 0.25)
    for _ in range(5):
        a, b = rng.uniform(0.0, 3.0, 2)
        x = float(rng.uniform(0.1, 0.9))
        combined = Fn(lambda y, a=a, b=b: a * f(y) + b * g(y),
                      vectorized=True,
                      breakpoints=tuple(f.breakpoints) + tuple(g.breakpoints))
        lhs = float(coupling_apply(model, combined, x))
        rhs = (a * float(coupling_apply(model, f, x))
               + b * float(coupling_apply(model, g, x)))
        assert lhs == pytest.approx(rhs, abs=1e-7)


def test_monotone_convergence_of_truncations():
    model = get_model("interval")
    v = Fn(lambda y: np.asarray(y, dtype=float) ** -0.25,
           vectorized=True, singular_points=(0.0,))
    full = float(coupling_apply(model, v, 0.5))
    prev = -math.inf
    for n in (2.0, 8.0, 64.0, 1024.0):
        vn = Fn(lambda y, n=n: np.minimum(
            np.asarray(y, dtype=float) ** -0.25, n), vectorized=True)
        cur = float(coupling_apply(model, vn, 0.5))
        assert cur >= prev - 1e-10
        assert cur <= full + 1e-8
        prev = cur
    assert full - prev <= 1e-6


def test_divergent_coupling_is_certified():
    model = get_model("newtonian5")
    val = coupling_apply(model, constant(1.0), np.zeros(5))
    assert not val.is_finite
    assert val.certificate.side == "radial-tail"


def test_grid_function_needs_no_singular_resolution():
    model = get_model("interval")
    gf = GridFunction(np.linspace(0.0, 1.0, 21), np.ones(21))
    # fine at an interior point, where no singular point is in play
    assert float(coupling_apply(model, gf, 0.5)) == pytest.approx(
        oracles.interval_v_one(0.5), abs=1e-3)
    # but V* style evaluation at x = 0 needs resolution below the grid:
    from greenlab.adjoint import adjoint_apply
    with pytest.raises(PreconditionError):
        adjoint_apply(model, gf, 0.0)


def test_w_apply_rejects_bad_density():
    model = get_model("interval")
    with pytest.raises(PreconditionError):
        w_apply(model, constant(0.0), constant(1.0), 0.5)


def test_pure_decompose_splits_off_harmonic_part():
    model = get_model("interval")
    pair = BiharmonicPair(
        Fn(lambda x: 0.5 * (1.0 - np.asarray(x, dtype=float)) + 2.0,
           vectorized=True), constant(1.0))
    u0, u1 = pure_decompose(model, pair, GRID)
    assert np.all(u1 >= -1e-9)
    assert np.max(np.abs(u1 - 2.0)) < 1e-8


def test_pure_decompose_rejects_deficient_pair():
    model = get_model("interval")
    broken = BiharmonicPair(
        Fn(lambda x: 0.25 * (1.0 - np.asarray(x, dtype=float)),
           vectorized=True), constant(1.0))
    with pytest.raises(ClassificationError):
        pure_decompose(model, broken, GRID)


def test_classify_pure_pair():
    model = get_model("interval")
    pair = BiharmonicPair(
        Fn(lambda x: 0.5 * (1.0 - np.asarray(x, dtype=float)),
           vectorized=True), constant(1.0))
    report = classify_pair(model, pair, GRID, SUBS)
    assert report.flags == frozenset({"hyperharmonic", "superharmonic",
                                      "pure"})


def test_classify_zero_pair_is_harmonic():
    model = get_model("interval")
    pair = BiharmonicPair(constant(0.0), constant(0.0))
    report = classify_pair(model, pair, GRID, SUBS)
    assert "harmonic" in report.flags
    assert "hyperharmonic" in report.flags


def test_classify_shifted_pair_is_superharmonic_not_pure():
    model = get_model("interval")
    pair = BiharmonicPair(
        Fn(lambda x: 0.5 * (1.0 - np.asarray(x, dtype=float)) + 1.0,
           vectorized=True), constant(1.0))
    report = classify_pair(model, pair, GRID, SUBS)
    assert "superharmonic" in report.flags
    assert "pure" not in report.flags
    assert "harmonic" not in report.flags
