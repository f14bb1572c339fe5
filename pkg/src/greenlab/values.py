"""Extended nonnegative values and divergence certificates.

Kernel evaluations and coupling integrals on the model spaces are either
finite nonnegative reals or genuinely +inf (a divergent integral, a kernel
evaluated on its singular locus).  Instead of letting float('inf') float
around unexplained, an infinite result always carries a
:class:`DivergenceCertificate` recording where the mass escapes and at what
rate, as measured by a dyadic probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import PreconditionError

# Classification constants for the dyadic probes.  A power-law fit within
# EXP_MARGIN of the critical exponent -1 is treated as divergent; partial
# integrals crossing BLOWUP_THRESHOLD are divergent regardless of the fit.
EXP_MARGIN = 0.05
BLOWUP_THRESHOLD = 1e12

# Default tolerances, one decade of headroom between verification layers:
# absolute quadrature error per integral, cross-operator identities built
# from several integrals, and finite-difference operator residuals.
QUAD_TOL = 1e-8
IDENTITY_TOL = 1e-6
FD_TOL = 1e-3

_ENDPOINT_SIDES = ("left", "right", "diagonal")
_TAIL_SIDE = "radial-tail"


@dataclass(frozen=True)
class DivergenceCertificate:
    """Evidence that a quantity is +inf.

    location:  the singular point (a coordinate), or the string "tail".
    side:      "left" / "right" for an endpoint approach, "diagonal" for a
               kernel evaluated across its own singularity, "radial-tail"
               for divergence at infinity.
    estimated_exponent:  fitted power p of the integrand near the location
               (f ~ C*d^p with d the distance to the point, or f ~ C*r^p
               as r -> inf for tails).
    probe_trace:  (distance, magnitude) samples along the dyadic approach;
               for integral probes the magnitude is the running partial
               integral, for point-value certificates it is the function
               value itself.
    """

    location: float | str
    side: str
    estimated_exponent: float
    probe_trace: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        if self.side not in _ENDPOINT_SIDES and self.side != _TAIL_SIDE:
            raise ValueError(f"unknown certificate side {self.side!r}")
        blown_up = any(abs(m) >= BLOWUP_THRESHOLD for _, m in self.probe_trace)
        if self.side == _TAIL_SIDE:
            sound = self.estimated_exponent >= -1.0 - EXP_MARGIN
        else:
            sound = self.estimated_exponent <= -1.0 + EXP_MARGIN
        if not (sound or blown_up):
            raise ValueError(
                "unsound certificate: exponent "
                f"{self.estimated_exponent:.4g} on side {self.side!r} is in the "
                "convergent range and the probe trace never blew up"
            )


@dataclass(frozen=True)
class ExtendedValue:
    """A nonnegative real extended with a certified +inf.

    Addition and scaling by nonnegative reals follow the usual conventions
    of potential theory: +inf absorbs addition and positive scaling, and
    0 * inf = 0 (scaling a divergent integral by a zero weight removes it).
    """

    kind: str  # "finite" | "infinite"
    value: float = 0.0
    error_bound: float = 0.0
    certificate: DivergenceCertificate | None = None

    @classmethod
    def finite(cls, value: float, error_bound: float = 0.0) -> "ExtendedValue":
        if not math.isfinite(value):
            raise ValueError("finite() requires a finite value")
        if value < 0.0:
            raise ValueError(f"extended values are nonnegative, got {value!r}")
        return cls("finite", float(value), float(abs(error_bound)), None)

    @classmethod
    def infinite(cls, certificate: DivergenceCertificate) -> "ExtendedValue":
        if certificate is None:
            raise ValueError("an infinite value requires a certificate")
        return cls("infinite", math.inf, math.inf, certificate)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __float__(self) -> float:
        return self.value if self.is_finite else math.inf

    def __add__(self, other: "ExtendedValue") -> "ExtendedValue":
        if not isinstance(other, ExtendedValue):
            return NotImplemented
        if not self.is_finite:
            return self
        if not other.is_finite:
            return other
        return ExtendedValue.finite(self.value + other.value,
                                    self.error_bound + other.error_bound)

    def scaled(self, c: float) -> "ExtendedValue":
        """Multiply by a nonnegative scalar; 0 * inf = 0."""
        if c < 0.0:
            raise PreconditionError("scaling factor must be nonnegative")
        if c == 0.0:
            return ExtendedValue.finite(0.0)
        if not self.is_finite:
            return self
        return ExtendedValue.finite(c * self.value, c * self.error_bound)

    # Extended-order comparisons (error bounds are deliberately ignored;
    # they matter for tolerance checks, not for the order).
    def __lt__(self, other: "ExtendedValue") -> bool:
        return float(self) < float(other)

    def __le__(self, other: "ExtendedValue") -> bool:
        return float(self) <= float(other)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        if self.is_finite:
            return f"ExtendedValue({self.value:.12g} ± {self.error_bound:.3g})"
        c = self.certificate
        return (f"ExtendedValue(+inf @ {c.location} [{c.side}], "
                f"exponent ~ {c.estimated_exponent:.3g})")
