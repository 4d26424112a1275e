"""Polarization post-selection and the resulting amplification of the advance.

The analyzer passes the state |theta> = cos(theta)|H> + sin(theta)|V>.  With
the interaction acting on H only, the amplification factor of the H-pulse
arrival shift carried into the post-selected envelope is the (real) weak
value

    A_w(theta) = cos(theta) / (sin(theta) + cos(theta)),

which diverges as theta -> -45 deg where the analyzer is orthogonal to the
balanced input.  A_w > 1 for theta in (-45 deg, 0), A_w < 0 for
theta < -45 deg (the shift flips sign), and A_w(theta) + A_w(90 deg - theta)
= 1.

Projection is unnormalized: the post-selected envelope is
cos(theta) h(t) + sin(theta) v(t) and the throughput is its energy over the
pulse's stored reference energy.  For the unequal-weight input state with
line-centre transmission T~ and an H pulse attenuated by the line, that
throughput is  2 T~ sin^2(theta + pi/4) / (1 + T~)  in the narrowband limit.

Angles are radians in (-pi/2, pi/2]; degree helpers live in the CLI layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FeasibilityError, ParameterError, SingularPostSelectionError
from .pulse_engine import Envelope, PolarizedPulse

# |sin + cos| below this is treated as the dark port: the weak value and the
# first-order response both diverge there.
_SINGULAR_TOLERANCE = 1e-12


def _check_angle(theta: float) -> None:
    if not np.isfinite(theta) or not (-np.pi / 2 < theta <= np.pi / 2):
        raise ParameterError(
            f"theta: must lie in (-pi/2, pi/2] radians; got {theta!r}"
        )


def weak_value(theta: float) -> float:
    """A_w(theta) = cos(theta) / (sin(theta) + cos(theta)).

    Raises SingularPostSelectionError within 1e-12 of the dark port
    (theta = -pi/4) and ParameterError outside (-pi/2, pi/2].
    """
    _check_angle(theta)
    s, c = np.sin(theta), np.cos(theta)
    if abs(s + c) <= _SINGULAR_TOLERANCE:
        raise SingularPostSelectionError(
            "theta is the dark port (analyzer orthogonal to the balanced "
            "input); the weak value diverges there"
        )
    return float(c / (s + c))


@dataclass(frozen=True)
class PostSelection:
    """Analyzer angle with its weak value precomputed."""

    theta: float
    weak_value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "weak_value", weak_value(self.theta))


@dataclass(frozen=True, eq=False)
class PostSelectedPulse:
    """Envelope after the analyzer plus the measured energy throughput."""

    envelope: Envelope
    throughput: float


def post_select(pulse: PolarizedPulse, theta: float) -> PostSelectedPulse:
    """Project onto cos(theta)|H> + sin(theta)|V> without renormalizing.

    Throughput is the projected energy over the pulse's reference energy
    (clamped to 1.0 against rounding).  theta = 0.0 passes H through exactly.
    """
    _check_angle(theta)
    if pulse.reference_energy <= 0:
        raise ParameterError("pulse.reference_energy must be positive")
    if theta == 0.0:
        envelope = pulse.h
    else:
        samples = np.cos(theta) * pulse.h.samples + np.sin(theta) * pulse.v.samples
        envelope = Envelope(pulse.h.grid, samples, pulse.h.carrier)
    throughput = min(envelope.energy() / pulse.reference_energy, 1.0)
    return PostSelectedPulse(envelope=envelope, throughput=throughput)


def total_transmission(t_tilde: float, theta: float) -> float:
    """Narrowband end-to-end energy throughput  2 T~ sin^2(theta+pi/4)/(1+T~)."""
    if not (0 < t_tilde <= 1):
        raise ParameterError(f"t_tilde: must be in (0, 1]; got {t_tilde}")
    _check_angle(theta)
    s2 = np.sin(theta + np.pi / 4) ** 2
    return float(2 * t_tilde * s2 / (1 + t_tilde))


def invert_transmission(total: float, theta: float) -> float:
    """Solve  total = 2 T~ sin^2(theta+pi/4)/(1+T~)  for the line transmission T~.

    T~ = total / (2 sin^2(theta+pi/4) - total).  Feasible only when
    sin^2(theta+pi/4) >= total; otherwise no T~ <= 1 reproduces the target
    and FeasibilityError is raised.
    """
    if not (0 < total <= 1):
        raise ParameterError(f"total: must be in (0, 1]; got {total}")
    _check_angle(theta)
    s2 = float(np.sin(theta + np.pi / 4) ** 2)
    if total > s2:
        raise FeasibilityError(
            f"requested throughput {total:g} exceeds the analyzer ceiling "
            f"sin^2(theta+pi/4) = {s2:g}; no line transmission can reach it"
        )
    return total / (2 * s2 - total)
