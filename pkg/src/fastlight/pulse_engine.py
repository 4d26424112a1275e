"""Time grids, Gaussian envelopes, and spectral propagation of polarized pulses.

The probe is a transform-limited Gaussian envelope riding on a carrier; its
horizontal component passes through the absorbing line while the vertical
component is a vacuum reference.  Propagation happens in the frequency domain.
With envelope spectral components written in the e^{+i Om t} basis (Om is the
baseband offset produced by the FFT), the line multiplies the H spectrum by

    exp(i Phi(Om)),   Phi(Om) = t0 gamma'^2 (Om + i gamma') / (Om^2 + gamma'^2),

whose phase slope at band centre equals +t0, i.e. the H pulse exits *earlier*
by t0, and whose field attenuation at band centre is exp(-gamma' t0), i.e. an
intensity transmission exp(-2 gamma' t0).  The common vacuum transit phase is
dropped for both components, so the V pulse is unshifted on the grid.

An idealized propagation (exact linear spectral phase, flat attenuation) is
provided alongside as the narrowband reference model: the two agree when the
pulse bandwidth is small against gamma'.

Conventions: times in seconds, angular frequencies in rad/s.  Envelope arrays
are immutable after construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .atomic_response import MediumSpec, ReducedLine, group_advance, transmission
from .errors import (
    ApproximationWarning,
    GridTooSmallError,
    ParameterError,
)

# A synthesized or propagated pulse must stay clear of the grid ends; edge
# samples above this fraction of the peak mean wrap-around would corrupt it.
_BOUNDARY_FRACTION = 1e-6
_MIN_SAMPLES = 256
_MIN_SPAN_SIGMAS = 16.0
_BANDWIDTH_GUARD = 10.0  # warn when pulse bandwidth exceeds this many gamma'


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid: n_samples (power of two) starting at t_start."""

    n_samples: int
    dt: float
    t_start: float

    def __post_init__(self):
        n = self.n_samples
        if n < _MIN_SAMPLES or (n & (n - 1)) != 0:
            raise ParameterError(
                f"n_samples: must be a power of two >= {_MIN_SAMPLES}; got {n}"
            )
        if not (self.dt > 0) or not np.isfinite(self.dt):
            raise ParameterError("dt: must be finite and > 0")
        if not np.isfinite(self.t_start):
            raise ParameterError("t_start: must be finite")

    @property
    def span(self) -> float:
        return self.n_samples * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t_start + np.arange(self.n_samples) * self.dt


def default_grid(sigma: float, n_samples: int = 4096, span_sigmas: float = 32.0) -> TimeGrid:
    """Grid centred on t = 0 spanning ``span_sigmas`` pulse widths."""
    if not (sigma > 0):
        raise ParameterError("sigma: must be > 0")
    if not (span_sigmas >= _MIN_SPAN_SIGMAS):
        raise ParameterError(f"span_sigmas: must be >= {_MIN_SPAN_SIGMAS:g}")
    span = span_sigmas * sigma
    return TimeGrid(n_samples=n_samples, dt=span / n_samples, t_start=-span / 2)


@dataclass(frozen=True, eq=False)
class Envelope:
    """Complex field envelope sampled on a TimeGrid, with carrier metadata."""

    grid: TimeGrid
    samples: np.ndarray
    carrier: float = 0.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex)
        if samples.ndim != 1 or samples.size != self.grid.n_samples:
            raise ParameterError(
                "samples: expected a 1-d array matching grid.n_samples"
            )
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def energy(self) -> float:
        """Integrated intensity, trapezoidal rule."""
        return float(np.trapezoid(np.abs(self.samples) ** 2, dx=self.grid.dt))


@dataclass(frozen=True, eq=False)
class PolarizedPulse:
    """H and V envelope pair on one grid.

    ``reference_energy`` is the total energy of the state when it was
    assembled (before the medium); throughput downstream is measured against
    it.
    """

    h: Envelope
    v: Envelope
    reference_energy: float = -1.0

    def __post_init__(self):
        if self.h.grid != self.v.grid:
            raise ParameterError("h and v must share the same time grid")
        if self.h.carrier != self.v.carrier:
            raise ParameterError("h and v must share the same carrier")
        if self.reference_energy < 0:
            object.__setattr__(
                self, "reference_energy", self.h.energy() + self.v.energy()
            )


def _check_no_wraparound(samples: np.ndarray, context: str) -> None:
    peak = float(np.max(np.abs(samples)))
    if peak == 0.0:
        return
    edge = max(abs(samples[0]), abs(samples[-1]))
    if edge >= _BOUNDARY_FRACTION * peak:
        raise GridTooSmallError(
            f"{context}: envelope reaches the grid boundary "
            f"(|edge|/|peak| = {edge / peak:.2e}); enlarge the grid span"
        )


def make_gaussian(
    grid: TimeGrid, sigma: float, center: float, amplitude: float, carrier: float = 0.0
) -> Envelope:
    """Transform-limited Gaussian envelope with intensity standard deviation sigma.

    samples = amplitude * exp(-(t - center)^2 / (4 sigma^2)), so the intensity
    profile has std sigma and FWHM 2 sqrt(2 ln 2) sigma.  The grid must span
    at least 16 sigma, the centre must lie in the middle half of the grid,
    and the resulting envelope must be negligible at the grid ends.
    """
    if not (sigma > 0) or not np.isfinite(sigma):
        raise ParameterError("sigma: must be finite and > 0")
    if not (amplitude > 0) or not np.isfinite(amplitude):
        raise ParameterError("amplitude: must be finite and > 0")
    if grid.span < _MIN_SPAN_SIGMAS * sigma:
        raise ParameterError(
            f"grid span {grid.span:.3e} s is below {_MIN_SPAN_SIGMAS:g} sigma"
        )
    lo = grid.t_start + grid.span / 4
    hi = grid.t_start + 3 * grid.span / 4
    if not (lo <= center <= hi):
        raise ParameterError(
            "center: must lie in the middle half of the grid "
            f"[{lo:.3e}, {hi:.3e}] s"
        )
    t = grid.times
    samples = amplitude * np.exp(-((t - center) ** 2) / (4 * sigma**2))
    _check_no_wraparound(samples, "make_gaussian")
    env = Envelope(grid=grid, samples=samples, carrier=carrier)
    if not np.isfinite(env.energy()) or env.energy() <= 0:
        raise ParameterError("synthesized envelope must carry finite positive energy")
    return env


def prepare_input(
    pulse: Envelope, t_tilde: float, relative_phase: float = 0.0
) -> PolarizedPulse:
    """Split a pulse into the unequal-weight H/V input state.

    h = pulse / sqrt(1 + T~),  v = e^{i phi} sqrt(T~) pulse / sqrt(1 + T~),
    where T~ in (0, 1] is the line-centre intensity transmission the H
    component will see.  H carries the larger weight; the total energy equals
    the source pulse energy, which is stored as the throughput reference.
    ``relative_phase`` models a static H-V optical path difference (default
    0: equal path lengths).
    """
    if not (0 < t_tilde <= 1):
        raise ParameterError(f"t_tilde: must be in (0, 1]; got {t_tilde}")
    norm = np.sqrt(1.0 + t_tilde)
    h = Envelope(pulse.grid, pulse.samples / norm, pulse.carrier)
    v_samples = pulse.samples * (np.sqrt(t_tilde) / norm)
    if relative_phase != 0.0:
        v_samples = v_samples * np.exp(1j * relative_phase)
    v = Envelope(pulse.grid, v_samples, pulse.carrier)
    return PolarizedPulse(h=h, v=v, reference_energy=pulse.energy())


def _baseband_frequencies(grid: TimeGrid) -> np.ndarray:
    return 2 * np.pi * np.fft.fftfreq(grid.n_samples, grid.dt)


def _spectral_width(samples: np.ndarray, grid: TimeGrid) -> float:
    """Intensity-weighted std of the baseband spectrum (rad/s)."""
    om = _baseband_frequencies(grid)
    w = np.abs(np.fft.fft(samples)) ** 2
    total = w.sum()
    if total == 0.0:
        return 0.0
    mean = float((om * w).sum() / total)
    return float(np.sqrt(max((om**2 * w).sum() / total - mean**2, 0.0)))


def propagate_ideal(pulse: PolarizedPulse, line: ReducedLine) -> PolarizedPulse:
    """Narrowband reference model: advance H by t0, attenuate it by sqrt(T~).

    The shift is an exact spectral linear phase; V is untouched.  This is the
    closed-form limit of ``propagate_lorentzian`` for bandwidth << gamma'.
    """
    if line.t0 == 0.0:
        return pulse
    grid = pulse.h.grid
    if line.t0 > grid.span / 4:
        raise GridTooSmallError(
            f"shift t0 = {line.t0:.3e} s exceeds a quarter of the grid span "
            f"{grid.span:.3e} s"
        )
    om = _baseband_frequencies(grid)
    shift = line.t0 if line.advance else -line.t0
    t_tilde = transmission(line)
    h_out = np.fft.ifft(np.fft.fft(pulse.h.samples) * np.exp(1j * om * shift))
    h_out = h_out * np.sqrt(t_tilde)
    _check_no_wraparound(h_out, "propagate_ideal")
    return PolarizedPulse(
        h=Envelope(grid, h_out, pulse.h.carrier),
        v=pulse.v,
        reference_energy=pulse.reference_energy,
    )


def propagate_lorentzian(
    pulse: PolarizedPulse, line: ReducedLine, include_absorption: bool = True
) -> PolarizedPulse:
    """Propagate H through the full Lorentzian line transfer function.

    H spectrum is multiplied by exp(i Phi(Om)) with
    Phi = t0 gamma'^2 (s Om + i gamma')/(Om^2 + gamma'^2), s = +-1 per the
    line's advance flag; V is untouched (common vacuum phase removed).
    ``include_absorption=False`` drops the i gamma' numerator term, leaving a
    pure phase filter — useful for energy-conservation checks.

    Warns when the pulse bandwidth exceeds 10 gamma' (the narrowband reading
    of the line parameters is then marginal; the distortion produced is
    physical).  Raises GridTooSmallError if the output reaches the grid edge.
    """
    if line.t0 == 0.0:
        return pulse
    grid = pulse.h.grid
    bandwidth = _spectral_width(pulse.h.samples, grid)
    if bandwidth > _BANDWIDTH_GUARD * line.gamma_prime:
        warnings.warn(
            f"pulse bandwidth {bandwidth:.3e} rad/s exceeds "
            f"{_BANDWIDTH_GUARD:g} gamma'; narrowband line parameters are "
            "marginal for this pulse",
            ApproximationWarning,
            stacklevel=2,
        )
    om = _baseband_frequencies(grid)
    gp = line.gamma_prime
    sign = 1.0 if line.advance else -1.0
    numerator = sign * om + (1j * gp if include_absorption else 0.0)
    phi = line.t0 * gp**2 * numerator / (om**2 + gp**2)
    h_out = np.fft.ifft(np.fft.fft(pulse.h.samples) * np.exp(1j * phi))
    _check_no_wraparound(h_out, "propagate_lorentzian")
    return PolarizedPulse(
        h=Envelope(grid, h_out, pulse.h.carrier),
        v=pulse.v,
        reference_energy=pulse.reference_energy,
    )


def propagate_spectral(pulse: PolarizedPulse, spec: MediumSpec) -> PolarizedPulse:
    """Propagate H through the medium's line, reduced from physical parameters."""
    return propagate_lorentzian(pulse, group_advance(spec))


def write_envelope_csv(envelope: Envelope, path) -> None:
    """Envelope dump: columns t_seconds, re, im, intensity (12-digit sci)."""
    t = envelope.times
    s = envelope.samples
    lines = ["t_seconds,re,im,intensity"]
    for i in range(s.size):
        lines.append(
            f"{t[i]:.12e},{s[i].real:.12e},{s[i].imag:.12e},{abs(s[i]) ** 2:.12e}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
