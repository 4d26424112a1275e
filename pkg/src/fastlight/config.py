"""Run configuration: JSON schema, unit handling, and core-object factories.

Config files carry explicit units in their key names; everything is
canonicalized on parse to microsecond-based units (time in us, angular rates
in rad/us) and converted to SI only when core objects are built.  Alternate
spellings accepted on input:

    *_mhz                     ordinary frequency in MHz -> rad/us (x 2 pi)
    length_cm                 -> length_m
    wavelength_nm             -> omega0_rad_per_us (2 pi c / lambda)
    line_center_transmission  -> gamma_prime_rad_per_us via
                                 gamma' = -ln(T~) / (2 t0)

Two modes: "reduced" drives the pipeline from (t0, gamma') directly;
"physical" derives them from the vapor parameters.  ``serialize_config``
always emits the canonical keys, so parse(serialize(cfg)) reproduces cfg
exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .atomic_response import C_LIGHT, MediumSpec, ReducedLine, group_advance
from .errors import ParameterError

_US = 1e-6  # seconds per microsecond
_RAD_PER_US = 1e6  # rad/s per rad/us

_MODES = ("reduced", "physical")
_PROPAGATIONS = ("spectral", "ideal")


@dataclass(frozen=True)
class LineConfig:
    """Reduced line: advance and broadened half-width in config units."""

    t0_us: float
    gamma_prime_rad_per_us: float

    def __post_init__(self):
        if not (self.t0_us >= 0) or not math.isfinite(self.t0_us):
            raise ParameterError("line.t0_us: must be finite and >= 0")
        if not (self.gamma_prime_rad_per_us > 0) or not math.isfinite(
            self.gamma_prime_rad_per_us
        ):
            raise ParameterError(
                "line.gamma_prime_rad_per_us: must be finite and > 0"
            )


@dataclass(frozen=True)
class MediumConfig:
    """Vapor-cell parameters in config units (rates rad/us, length m)."""

    beta_rad_per_us: float
    gamma_rad_per_us: float
    Gamma_rad_per_us: float
    omega_c_rabi_rad_per_us: float
    Delta_rad_per_us: float
    length_m: float
    omega0_rad_per_us: float


@dataclass(frozen=True)
class PulseConfig:
    sigma_us: float = 28.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.sigma_us > 0) or not math.isfinite(self.sigma_us):
            raise ParameterError("pulse.sigma_us: must be finite and > 0")
        if not (self.amplitude > 0) or not math.isfinite(self.amplitude):
            raise ParameterError("pulse.amplitude: must be finite and > 0")


@dataclass(frozen=True)
class GridConfig:
    n_samples: int = 4096
    span_sigmas: float = 32.0

    def __post_init__(self):
        n = self.n_samples
        if not isinstance(n, int) or n < 256 or (n & (n - 1)) != 0:
            raise ParameterError(
                "grid.n_samples: must be a power-of-two integer >= 256"
            )
        if not (self.span_sigmas >= 16.0):
            raise ParameterError("grid.span_sigmas: must be >= 16")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "reduced"
    line: LineConfig | None = None
    medium: MediumConfig | None = None
    pulse: PulseConfig = field(default_factory=PulseConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    theta_list_deg: tuple = (-40.0, -50.0)
    transmission_list: tuple = (0.02, 0.05, 0.1, 0.2, 0.5, 0.9)
    propagation: str = "spectral"
    relative_phase: float = 0.0
    spectrum_points: int = 1601
    output_dir: str = "out"

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ParameterError(f"mode: must be one of {_MODES}; got {self.mode!r}")
        if self.mode == "reduced":
            if self.line is None:
                raise ParameterError("line: required in reduced mode")
            if self.medium is not None:
                raise ParameterError("medium: not allowed in reduced mode")
        else:
            if self.medium is None:
                raise ParameterError("medium: required in physical mode")
            if self.line is not None:
                raise ParameterError("line: not allowed in physical mode")
        if self.propagation not in _PROPAGATIONS:
            raise ParameterError(
                f"propagation: must be one of {_PROPAGATIONS}; got "
                f"{self.propagation!r}"
            )
        if len(self.theta_list_deg) == 0:
            raise ParameterError("theta_list_deg: must not be empty")
        for th in self.theta_list_deg:
            if not (-90.0 < th <= 90.0):
                raise ParameterError(
                    f"theta_list_deg: angles must lie in (-90, 90]; got {th}"
                )
        if len(self.transmission_list) == 0:
            raise ParameterError("transmission_list: must not be empty")
        for t in self.transmission_list:
            if not (0 < t <= 1):
                raise ParameterError(
                    f"transmission_list: values must lie in (0, 1]; got {t}"
                )
        if not isinstance(self.spectrum_points, int) or self.spectrum_points < 16:
            raise ParameterError("spectrum_points: must be an integer >= 16")
        if not math.isfinite(self.relative_phase):
            raise ParameterError("relative_phase: must be finite")
        object.__setattr__(self, "theta_list_deg", tuple(self.theta_list_deg))
        object.__setattr__(self, "transmission_list", tuple(self.transmission_list))

    def medium_spec(self) -> MediumSpec:
        if self.medium is None:
            raise ParameterError("medium: not configured (reduced mode)")
        m = self.medium
        return MediumSpec(
            beta=m.beta_rad_per_us * _RAD_PER_US,
            gamma=m.gamma_rad_per_us * _RAD_PER_US,
            Gamma=m.Gamma_rad_per_us * _RAD_PER_US,
            omega_c_rabi=m.omega_c_rabi_rad_per_us * _RAD_PER_US,
            Delta=m.Delta_rad_per_us * _RAD_PER_US,
            length=m.length_m,
            omega0=m.omega0_rad_per_us * _RAD_PER_US,
        )

    def reduced_line(self) -> ReducedLine:
        """The line the pipeline propagates through, in SI units."""
        if self.mode == "physical":
            return group_advance(self.medium_spec())
        return ReducedLine(
            t0=self.line.t0_us * _US,
            gamma_prime=self.line.gamma_prime_rad_per_us * _RAD_PER_US,
        )

    def pulse_sigma_s(self) -> float:
        return self.pulse.sigma_us * _US


def default_config() -> RunConfig:
    """Quick-start: a half-transmitting line advancing by 0.28 us."""
    gamma_prime = -math.log(0.5) / (2 * 0.28)
    return RunConfig(line=LineConfig(t0_us=0.28, gamma_prime_rad_per_us=gamma_prime))


def _take(data: dict, section: str, known: set) -> None:
    unknown = set(data) - known
    if unknown:
        where = f"{section}." if section else ""
        raise ParameterError(f"{where}{sorted(unknown)[0]}: unknown key")


def _number(data: dict, section: str, key: str):
    value = data[key]
    path = f"{section}.{key}" if section else key
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterError(f"{path}: must be a number")
    return float(value)


def _element_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterError(f"{path}: entries must be numbers")
    return float(value)


def _rate(data: dict, section: str, stem: str, required: bool = True):
    """Read an angular rate given as <stem>_rad_per_us or <stem>_mhz."""
    rad_key, mhz_key = f"{stem}_rad_per_us", f"{stem}_mhz"
    if rad_key in data and mhz_key in data:
        raise ParameterError(
            f"{section}.{stem}: give exactly one of {rad_key} or {mhz_key}"
        )
    if rad_key in data:
        return _number(data, section, rad_key)
    if mhz_key in data:
        return 2 * math.pi * _number(data, section, mhz_key)
    if required:
        raise ParameterError(f"{section}.{rad_key}: required (or {mhz_key})")
    return None


def _parse_line(data) -> LineConfig:
    if not isinstance(data, dict):
        raise ParameterError("line: must be an object")
    _take(data, "line", {"t0_us", "gamma_prime_rad_per_us", "line_center_transmission"})
    if "t0_us" not in data:
        raise ParameterError("line.t0_us: required")
    t0_us = _number(data, "line", "t0_us")
    has_gp = "gamma_prime_rad_per_us" in data
    has_tc = "line_center_transmission" in data
    if has_gp == has_tc:
        raise ParameterError(
            "line: give exactly one of gamma_prime_rad_per_us or "
            "line_center_transmission"
        )
    if has_gp:
        gp = _number(data, "line", "gamma_prime_rad_per_us")
    else:
        tc = _number(data, "line", "line_center_transmission")
        if not (0 < tc < 1):
            raise ParameterError(
                "line.line_center_transmission: must be in (0, 1) to fix gamma'"
            )
        if not (t0_us > 0):
            raise ParameterError(
                "line.t0_us: must be > 0 when gamma' is set via "
                "line_center_transmission"
            )
        gp = -math.log(tc) / (2 * t0_us)
    return LineConfig(t0_us=t0_us, gamma_prime_rad_per_us=gp)


def _parse_medium(data) -> MediumConfig:
    if not isinstance(data, dict):
        raise ParameterError("medium: must be an object")
    known = set()
    for stem in ("beta", "gamma", "Gamma", "omega_c_rabi", "Delta", "omega0"):
        known.update({f"{stem}_rad_per_us", f"{stem}_mhz"})
    known.update({"length_m", "length_cm", "wavelength_nm"})
    _take(data, "medium", known)
    rates = {
        stem: _rate(data, "medium", stem)
        for stem in ("beta", "gamma", "Gamma", "omega_c_rabi", "Delta")
    }
    if "length_m" in data and "length_cm" in data:
        raise ParameterError("medium: give exactly one of length_m or length_cm")
    if "length_m" in data:
        length_m = _number(data, "medium", "length_m")
    elif "length_cm" in data:
        length_m = _number(data, "medium", "length_cm") * 1e-2
    else:
        raise ParameterError("medium.length_m: required (or length_cm)")
    omega0 = _rate(data, "medium", "omega0", required=False)
    if "wavelength_nm" in data:
        if omega0 is not None:
            raise ParameterError(
                "medium: give exactly one of omega0_rad_per_us/omega0_mhz or "
                "wavelength_nm"
            )
        wl = _number(data, "medium", "wavelength_nm")
        if not (wl > 0):
            raise ParameterError("medium.wavelength_nm: must be > 0")
        omega0 = 2 * math.pi * C_LIGHT / (wl * 1e-9) / _RAD_PER_US
    if omega0 is None:
        raise ParameterError(
            "medium.omega0_rad_per_us: required (or omega0_mhz or wavelength_nm)"
        )
    return MediumConfig(
        beta_rad_per_us=rates["beta"],
        gamma_rad_per_us=rates["gamma"],
        Gamma_rad_per_us=rates["Gamma"],
        omega_c_rabi_rad_per_us=rates["omega_c_rabi"],
        Delta_rad_per_us=rates["Delta"],
        length_m=length_m,
        omega0_rad_per_us=omega0,
    )


def parse_config(data) -> RunConfig:
    """Build a RunConfig from a parsed JSON object (dict)."""
    if not isinstance(data, dict):
        raise ParameterError("config: top level must be an object")
    _take(
        data,
        "",
        {
            "mode",
            "line",
            "medium",
            "pulse",
            "grid",
            "theta_list_deg",
            "transmission_list",
            "propagation",
            "relative_phase",
            "spectrum_points",
            "output_dir",
        },
    )
    mode = data.get("mode")
    if mode is None:
        if "medium" in data and "line" not in data:
            mode = "physical"
        elif "line" in data and "medium" not in data:
            mode = "reduced"
        else:
            raise ParameterError(
                "mode: required when neither (or both) of line/medium decide it"
            )
    line = _parse_line(data["line"]) if "line" in data else None
    medium = _parse_medium(data["medium"]) if "medium" in data else None

    pulse = PulseConfig()
    if "pulse" in data:
        pdata = data["pulse"]
        if not isinstance(pdata, dict):
            raise ParameterError("pulse: must be an object")
        _take(pdata, "pulse", {"sigma_us", "amplitude"})
        pulse = PulseConfig(
            sigma_us=_number(pdata, "pulse", "sigma_us")
            if "sigma_us" in pdata
            else PulseConfig.sigma_us,
            amplitude=_number(pdata, "pulse", "amplitude")
            if "amplitude" in pdata
            else PulseConfig.amplitude,
        )

    grid = GridConfig()
    if "grid" in data:
        gdata = data["grid"]
        if not isinstance(gdata, dict):
            raise ParameterError("grid: must be an object")
        _take(gdata, "grid", {"n_samples", "span_sigmas"})
        n_samples = gdata.get("n_samples", GridConfig.n_samples)
        if isinstance(n_samples, bool) or not isinstance(n_samples, int):
            raise ParameterError("grid.n_samples: must be an integer")
        grid = GridConfig(
            n_samples=n_samples,
            span_sigmas=_number(gdata, "grid", "span_sigmas")
            if "span_sigmas" in gdata
            else GridConfig.span_sigmas,
        )

    kwargs = {}
    if "theta_list_deg" in data:
        thetas = data["theta_list_deg"]
        if not isinstance(thetas, list):
            raise ParameterError("theta_list_deg: must be an array of numbers")
        kwargs["theta_list_deg"] = tuple(
            _element_number(th, "theta_list_deg") for th in thetas
        )
    if "transmission_list" in data:
        ts = data["transmission_list"]
        if not isinstance(ts, list):
            raise ParameterError("transmission_list: must be an array of numbers")
        kwargs["transmission_list"] = tuple(
            _element_number(t, "transmission_list") for t in ts
        )
    if "propagation" in data:
        kwargs["propagation"] = data["propagation"]
    if "relative_phase" in data:
        kwargs["relative_phase"] = _number(data, "", "relative_phase")
    if "spectrum_points" in data:
        sp = data["spectrum_points"]
        if isinstance(sp, bool) or not isinstance(sp, int):
            raise ParameterError("spectrum_points: must be an integer")
        kwargs["spectrum_points"] = sp
    if "output_dir" in data:
        if not isinstance(data["output_dir"], str) or not data["output_dir"]:
            raise ParameterError("output_dir: must be a non-empty string")
        kwargs["output_dir"] = data["output_dir"]

    return RunConfig(mode=mode, line=line, medium=medium, pulse=pulse, grid=grid, **kwargs)


def serialize_config(cfg: RunConfig) -> dict:
    """Canonical JSON form; parse_config(serialize_config(cfg)) == cfg."""
    out = {"mode": cfg.mode}
    if cfg.line is not None:
        out["line"] = {
            "t0_us": cfg.line.t0_us,
            "gamma_prime_rad_per_us": cfg.line.gamma_prime_rad_per_us,
        }
    if cfg.medium is not None:
        m = cfg.medium
        out["medium"] = {
            "beta_rad_per_us": m.beta_rad_per_us,
            "gamma_rad_per_us": m.gamma_rad_per_us,
            "Gamma_rad_per_us": m.Gamma_rad_per_us,
            "omega_c_rabi_rad_per_us": m.omega_c_rabi_rad_per_us,
            "Delta_rad_per_us": m.Delta_rad_per_us,
            "length_m": m.length_m,
            "omega0_rad_per_us": m.omega0_rad_per_us,
        }
    out["pulse"] = {"sigma_us": cfg.pulse.sigma_us, "amplitude": cfg.pulse.amplitude}
    out["grid"] = {
        "n_samples": cfg.grid.n_samples,
        "span_sigmas": cfg.grid.span_sigmas,
    }
    out["theta_list_deg"] = list(cfg.theta_list_deg)
    out["transmission_list"] = list(cfg.transmission_list)
    out["propagation"] = cfg.propagation
    out["relative_phase"] = cfg.relative_phase
    out["spectrum_points"] = cfg.spectrum_points
    out["output_dir"] = cfg.output_dir
    return out


def load_config(path) -> RunConfig:
    """Read and parse a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParameterError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file is not valid JSON: {exc}") from None
    return parse_config(data)


def save_config(cfg: RunConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(serialize_config(cfg), fh, indent=2)
        fh.write("\n")
