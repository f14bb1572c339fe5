"""Numerical laboratory for coupled Green kernels on model spaces.

The package realizes the coupling operator V, its adjoint V*, and the
composed kernel H(x, y) = integral of G1(x, z) G2(z, y) dmu(z) on three
concrete models (an interval potential theory, a clamped 1-d plate, and
the Newtonian kernel pair in dimension five and up), together with the
quadrature, divergence certificates, and verification suites needed to
check the identities the construction promises -- or to certify, with an
exponent and a trace, exactly where they fail.
"""

__version__ = "0.1.0"

from .values import (DivergenceCertificate, ExtendedValue, FD_TOL,
                     IDENTITY_TOL, QUAD_TOL)
from .errors import (ClassificationError, ConditioningError, GreenLabError,
                     ModelDomainError, PreconditionError)
from .kernels import BiharmonicPair, Fn, GreenKernel, ModelSpace, bump, constant
from .quadrature import integrate, integrate_radial, probe_divergence, probe_tail
from .coupling import (classify_pair, compose_green, coupling_apply,
                       pure_decompose, w_apply)
from .adjoint import (adjoint_apply, adjoint_gate_check, continuity_probe,
                      duality_residual, lsc_check)
from .riquier import (biharmonic_measures, regular_subdomain, solve_riquier,
                      verify_hyperharmonic)
from .models import get_model

__all__ = [
    "__version__",
    "DivergenceCertificate", "ExtendedValue",
    "QUAD_TOL", "IDENTITY_TOL", "FD_TOL",
    "GreenLabError", "PreconditionError", "ModelDomainError",
    "ConditioningError", "ClassificationError",
    "Fn", "GreenKernel", "ModelSpace", "BiharmonicPair", "bump", "constant",
    "integrate", "integrate_radial", "probe_divergence", "probe_tail",
    "coupling_apply", "compose_green", "w_apply", "pure_decompose",
    "classify_pair",
    "adjoint_apply", "adjoint_gate_check", "continuity_probe", "lsc_check",
    "duality_residual",
    "biharmonic_measures", "regular_subdomain", "solve_riquier",
    "verify_hyperharmonic",
    "get_model",
]
