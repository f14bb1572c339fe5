"""The radial model on R^N, N >= 5: kernel c_N |x-y|^(2-N), Lebesgue measure.

Dimension five is where the composed kernel H(x,y) = int G(x,z)G(z,y) dz
first becomes finite off the diagonal; below that the defining integral has
a fat tail.  The constructor therefore refuses N < 5, and
``composition_tail_report`` exists to document the boundary case N = 4 by
running the same tail probe that would reject it.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import ConditioningError, ModelDomainError, PreconditionError
from ..kernels import GreenKernel, ModelSpace, RadialDomain, ReferenceMeasure
from ..quadrature import (adaptive_panels, integrate, integrate_radial,
                          probe_divergence, probe_tail, sphere_surface_area,
                          ProbeReport)
from ..values import QUAD_TOL, DivergenceCertificate, ExtendedValue

# Distances below this make the composed-kernel quadrature ill-conditioned
# (the inner angular peak narrows past what the panel budget resolves), so
# such requests are refused outright rather than answered unreliably.
NEAR_DIAGONAL_LIMIT = 1e-3


def newton_constant(n: int) -> float:
    """The constant making -Delta of c_n |.|^(2-n) the unit point mass.

    Equivalently: the Gauss flux of the kernel through any sphere around its
    pole is exactly one; ``gauss_flux`` re-measures this by quadrature.
    """
    if n < 3:
        raise ModelDomainError(f"the power-law kernel needs dimension >= 3, got {n}")
    return math.gamma(n / 2.0) / ((n - 2) * 2.0 * math.pi ** (n / 2.0))


def _require_dim(n: int) -> int:
    n = int(n)
    if n < 5:
        raise ModelDomainError(
            f"the radial model needs dimension >= 5 (got {n}): below that the "
            "composed kernel's defining integral diverges at the tail")
    return n


def _as_point(n: int, p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 0:
        out = np.zeros(n)
        out[0] = float(arr)
        return out
    return RadialDomain(n).require(arr)


@lru_cache(maxsize=None)
def newtonian_model(n: int) -> ModelSpace:
    n = _require_dim(n)
    c = newton_constant(n)

    def raw(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dist = np.sqrt(np.sum((y - x) ** 2, axis=-1))
        with np.errstate(divide="ignore"):
            return c * dist ** (2.0 - n)

    kernel = GreenKernel(f"newton{n}", RadialDomain(n), raw,
                         diagonal_exponent=2.0 - n, kink_on_diagonal=False,
                         symmetric=True)
    mu = ReferenceMeasure(
        "lebesgue", lambda r: np.ones_like(np.asarray(r, dtype=float)))
    return ModelSpace(id=f"newtonian{n}", domain=RadialDomain(n),
                      G1=kernel, G2=kernel, mu=mu, dim=n)


def kernel_at_distance(n: int, d: float) -> ExtendedValue:
    """G at separation d: c_n d^(2-n), +inf exactly at d = 0."""
    n = _require_dim(n)
    d = float(d)
    if d < 0.0:
        raise PreconditionError("separation must be nonnegative")
    c = newton_constant(n)
    if d == 0.0:
        trace = tuple((2.0 ** -k, c * (2.0 ** -k) ** (2.0 - n))
                      for k in range(2, 22, 4))
        cert = DivergenceCertificate(0.0, "diagonal", 2.0 - n, trace)
        return ExtendedValue.infinite(cert)
    return ExtendedValue.finite(c * d ** (2.0 - n))


def newton_kernel(n: int, x, y) -> ExtendedValue:
    """G(x, y) for coordinate points x, y of R^n."""
    n = _require_dim(n)
    xv = _as_point(n, x)
    yv = _as_point(n, y)
    return kernel_at_distance(n, float(np.linalg.norm(xv - yv)))


def gauss_flux(n: int, r: float, tol: float = 1e-10) -> float:
    """Outward flux of -grad G through a sphere of radius r around the pole.

    The radial derivative is taken by fourth-order finite differences of the
    kernel at points on the sphere, and the surface integral runs over the
    polar angle with the axially reduced area weight, so both the power law
    and the normalization constant are genuinely measured.
    """
    n = _require_dim(n)
    r = float(r)
    if r <= 0.0:
        raise PreconditionError("flux radius must be positive")
    model = newtonian_model(n)
    raw = model.G1.raw
    pole = np.zeros(n)
    h = 1e-3 * r

    def dgdr(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        units = np.zeros((theta.size, n))
        units[:, 0] = np.cos(theta)
        units[:, 1] = np.sin(theta)
        samples = []
        for rr in (r - 2 * h, r - h, r + h, r + 2 * h):
            samples.append(np.asarray(raw(pole, rr * units), dtype=float))
        gm2, gm1, gp1, gp2 = samples
        return (8.0 * (gp1 - gm1) - (gp2 - gm2)) / (12.0 * h)

    def integrand(theta):
        theta = np.asarray(theta, dtype=float)
        return dgdr(theta) * np.sin(theta) ** (n - 2)

    integrand.vectorized = True
    val, _, _ = adaptive_panels(integrand, 0.0, math.pi, tol)
    return -sphere_surface_area(n - 1) * r ** (n - 1) * val


def constant_coupling_divergence(n: int, x=None, c: float = 1.0) -> DivergenceCertificate:
    """Certify that V applied to the constant c has no finite value anywhere.

    The radial reduction of int G(x,z) c dz has integrand proportional to r
    after the volume weight, so the mass escapes at the tail with exponent
    +1.  The returned certificate is the reason no everywhere-positive
    coupled pair exists on this model.
    """
    n = _require_dim(n)
    if c <= 0.0:
        raise PreconditionError("the constant must be positive")
    if x is not None:
        _as_point(n, x)     # translation invariance: any base point, same result
    cn = newton_constant(n)

    def profile(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return c * cn * r ** (2.0 - n)

    profile.vectorized = True
    res = integrate_radial(profile, n, upper=None, tol=QUAD_TOL)
    if res.value.is_finite:     # pragma: no cover - mathematically impossible
        raise ModelDomainError("constant coupling unexpectedly converged")
    return res.value.certificate


def truncated_constant_coupling(n: int, upper: float, c: float = 1.0) -> ExtendedValue:
    """The same integral cut at radius ``upper``: finite, value sigma c c_n R^2/2."""
    n = _require_dim(n)
    upper = float(upper)
    if upper <= 0.0:
        raise PreconditionError("truncation radius must be positive")
    cn = newton_constant(n)

    def profile(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return c * cn * r ** (2.0 - n)

    profile.vectorized = True
    return integrate_radial(profile, n, upper=upper, tol=QUAD_TOL).value


def _composition_outer(n: int, d: float, inner_tol: float):
    """s -> prefactor * s * int_0^pi |sep|^(2-n) sin^(n-2) dtheta at radius s.

    The squared separation is written (s-d)^2 + 4 s d sin^2(theta/2), which
    is exact and loses no precision when s is close to d.
    """
    pref = newton_constant(n) ** 2 * sphere_surface_area(n - 1)
    half_power = 0.5 * (2.0 - n)

    def outer(s: float) -> float:
        s = float(s)
        if s == 0.0:
            return 0.0

        def gth(theta):
            theta = np.asarray(theta, dtype=float)
            sep2 = (s - d) ** 2 + 4.0 * s * d * np.sin(0.5 * theta) ** 2
            return sep2 ** half_power * np.sin(theta) ** (n - 2)

        gth.vectorized = True
        val, _, _ = adaptive_panels(gth, 0.0, math.pi, inner_tol,
                                    max_panels=800)
        return pref * s * val

    return outer


def riesz_compose(n: int, x, y, tol: float = 1e-7) -> ExtendedValue:
    """H(x, y) = int G(x,z) G(z,y) dz by the axially reduced double integral.

    Off the diagonal this is finite for every n >= 5 and scales as
    |x-y|^(4-n); on the diagonal the radial integrand behaves like s^(3-n)
    at the origin, which is certified divergent.  Separations below
    NEAR_DIAGONAL_LIMIT are refused as ill-conditioned.
    """
    n = _require_dim(n)
    xv = _as_point(n, x)
    yv = _as_point(n, y)
    d = float(np.linalg.norm(xv - yv))
    inner_tol = max(1e-13, 1e-3 * tol)
    outer = _composition_outer(n, d, inner_tol)
    if d == 0.0:
        rep = probe_divergence(outer, 0.0, side="right", scale=1.0, tol=tol)
        if not rep.divergent:   # pragma: no cover - mathematically impossible
            raise ModelDomainError("diagonal composition unexpectedly converged")
        cert = DivergenceCertificate(0.0, "diagonal", rep.estimated_exponent,
                                     rep.trace)
        return ExtendedValue.infinite(cert)
    if d < NEAR_DIAGONAL_LIMIT:
        raise ConditioningError(
            f"separation {d:.3e} is below {NEAR_DIAGONAL_LIMIT:g}; the angular "
            "peak of the composition integrand cannot be resolved reliably")
    start = 2.0 * max(d, 1.0)
    body = integrate(outer, (0.0, start), tol=0.5 * tol, breakpoints=(d,))
    if not body.value.is_finite:    # pragma: no cover - defensive
        return body.value
    tail = probe_tail(outer, start=start, tol=0.5 * tol)
    if tail.divergent:              # pragma: no cover - impossible for n >= 5
        return ExtendedValue.infinite(tail.certificate)
    return ExtendedValue.finite(body.value.value + tail.value,
                                body.value.error_bound + tail.error)


def composition_tail_report(n: int, d: float = 1.0,
                            tol: float = 1e-9) -> ProbeReport:
    """Tail probe of the composition integrand, admitting n = 4.

    The model constructor rejects n < 5; this utility shows why, by running
    the identical tail classification on the defining integrand: at n = 4 the
    radial integrand decays like 1/s, exponent -1, certified divergent, while
    n >= 5 extrapolates to a finite remainder.
    """
    n = int(n)
    if n < 4:
        raise ModelDomainError(
            f"the tail documentation covers the boundary case n >= 4, got {n}")
    d = float(d)
    if d <= 0.0:
        raise PreconditionError("separation must be positive")
    outer = _composition_outer(n, d, inner_tol=1e-11)
    return probe_tail(outer, start=2.0 * max(d, 1.0), tol=tol)
