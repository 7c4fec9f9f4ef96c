"""Parameter records for the 2DEG and the LC resonator, plus the JSON config format."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, replace

from .constants import CM2, E, GHZ, M_E, PS, UM


class ParameterError(ValueError):
    """A physical parameter violates its validity range."""


class ConfigError(ValueError):
    """Malformed or unknown content in a JSON parameter file."""


def _require(cond, msg):
    if not cond:
        raise ParameterError(msg)


@dataclass(frozen=True)
class MaterialParams:
    """2DEG parameters, SI units.

    n_s [m^-2], m_star [kg], mu [m^2/Vs], tau_q [s], T_el [K], W and L [m].
    """

    n_s: float = 3.3e15
    m_star: float = 0.067 * M_E
    mu: float = 310.0
    tau_q: float = 5e-12
    T_el: float = 0.1
    W: float = 40e-6
    L: float = 100e-6

    def __post_init__(self):
        for name in ("n_s", "m_star", "mu", "tau_q", "W", "L"):
            v = getattr(self, name)
            _require(math.isfinite(v) and v > 0, f"{name} must be > 0, got {v!r}")
        _require(math.isfinite(self.T_el) and self.T_el >= 0, f"T_el must be >= 0, got {self.T_el!r}")
        if derive_transport_lifetime(self) < self.tau_q:
            warnings.warn(
                "transport lifetime mu*m_star/e is shorter than tau_q", RuntimeWarning, stacklevel=3
            )

    @property
    def m_star_ratio(self) -> float:
        return self.m_star / M_E


@dataclass(frozen=True)
class ResonatorParams:
    """LC resonator: f_cav [Hz], Q, eta = Omega/omega_cav, tau_p [s], f_p [Hz]."""

    f_cav: float = 205e9
    Q: float = 5.0
    eta: float = 0.20
    tau_p: float = 300e-12
    f_p: float = 60e9

    def __post_init__(self):
        _require(math.isfinite(self.f_cav) and self.f_cav > 0, f"f_cav must be > 0, got {self.f_cav!r}")
        _require(math.isfinite(self.Q) and self.Q > 0, f"Q must be > 0, got {self.Q!r}")
        _require(math.isfinite(self.eta) and self.eta >= 0, f"eta must be >= 0, got {self.eta!r}")
        _require(math.isfinite(self.tau_p) and self.tau_p > 0, f"tau_p must be > 0, got {self.tau_p!r}")
        _require(math.isfinite(self.f_p) and self.f_p >= 0, f"f_p must be >= 0, got {self.f_p!r}")

    @property
    def coupling(self) -> float:
        """Omega_f = eta * f_cav [Hz]."""
        return self.eta * self.f_cav

    @property
    def linewidth(self) -> float:
        """Cavity FWHM kappa = f_cav / Q [Hz]."""
        return self.f_cav / self.Q


def derive_transport_lifetime(m: MaterialParams) -> float:
    """Drude transport lifetime mu * m_star / e [s]."""
    return m.mu * m.m_star / E


# Preset resonators. RH is the bare Hall bar (no coupling).
CH205 = ResonatorParams(f_cav=205e9, eta=0.20)
CH140 = ResonatorParams(f_cav=140e9, eta=0.30)
RH = ResonatorParams(f_cav=205e9, eta=0.0)


# --- JSON config -------------------------------------------------------------

# key -> (record, field, scale to SI)
_MATERIAL_KEYS = {
    "n_s_per_cm2": ("n_s", 1.0 / CM2),
    "m_star_ratio": ("m_star", M_E),
    "mu_cm2_per_Vs": ("mu", CM2),
    "tau_q_ps": ("tau_q", PS),
    "T_el_K": ("T_el", 1.0),
    "W_um": ("W", UM),
    "L_um": ("L", UM),
}
_RESONATOR_KEYS = {
    "f_cav_GHz": ("f_cav", GHZ),
    "Q": ("Q", 1.0),
    "eta": ("eta", 1.0),
    "tau_p_ps": ("tau_p", PS),
    "f_p_GHz": ("f_p", GHZ),
}
_RESPONSE_KEYS = {
    "A_pol_ohm": ("A_pol", 1.0),
    "A_1_ohm": ("A_1", 1.0),
    "A_hi_ohm": ("A_hi", 1.0),
    "n_harmonics": ("n_max_harmonic", None),
    "gamma_LL_GHz": ("gamma_LL", GHZ),
}
CONFIG_KEYS = tuple(_MATERIAL_KEYS) + tuple(_RESONATOR_KEYS) + tuple(_RESPONSE_KEYS)


@dataclass(frozen=True)
class Config:
    material: MaterialParams
    resonator: ResonatorParams
    response: "object"  # photoresponse.PhotoResponseParams


def config_from_dict(d: dict) -> Config:
    from .photoresponse import PhotoResponseParams

    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(d) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    def collect(table):
        out = {}
        for key, (name, scale) in table.items():
            if key not in d:
                continue
            v = d[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"config key {key} must be a number, got {v!r}")
            if scale is None:
                if int(v) != v:
                    raise ConfigError(f"config key {key} must be an integer, got {v!r}")
                out[name] = int(v)
            else:
                out[name] = float(v) * scale
        return out

    try:
        return Config(
            MaterialParams(**collect(_MATERIAL_KEYS)),
            ResonatorParams(**collect(_RESONATOR_KEYS)),
            PhotoResponseParams(**collect(_RESPONSE_KEYS)),
        )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None


def config_to_dict(cfg: Config) -> dict:
    out = {}
    for table, rec in (
        (_MATERIAL_KEYS, cfg.material),
        (_RESONATOR_KEYS, cfg.resonator),
        (_RESPONSE_KEYS, cfg.response),
    ):
        for key, (name, scale) in table.items():
            v = getattr(rec, name)
            out[key] = v if scale is None else v / scale
    return out


def load_config(path) -> Config:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(d)


def default_config() -> Config:
    return config_from_dict({})


def with_eta(r: ResonatorParams, eta: float) -> ResonatorParams:
    return replace(r, eta=eta)
