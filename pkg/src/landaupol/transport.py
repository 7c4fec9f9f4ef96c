"""Dark longitudinal resistivity: Drude background + first-harmonic SdH with
thermal and Dingle damping, plus a phenomenological cavity scattering channel
that shortens the quantum lifetime near the polariton anti-crossing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import E, HBAR, KB
from .grids import Grid1D
from .landau import cyclotron_frequency, filling_factor
from .params import MaterialParams, ParameterError, ResonatorParams
from .polariton import magneto_plasmon_frequency


@dataclass(frozen=True, eq=False)
class TransportTrace:
    b_axis: Grid1D
    rho_xx: np.ndarray  # ohm (per square)
    material: MaterialParams
    resonator: ResonatorParams | None
    eta_used: float

    def __post_init__(self):
        if len(self.rho_xx) != self.b_axis.count:
            raise ValueError("rho_xx length does not match b_axis")

    @property
    def B(self) -> np.ndarray:
        return self.b_axis.values()


def drude_rho0(m: MaterialParams) -> float:
    """Zero-field sheet resistivity 1 / (n_s e mu) [ohm/sq]."""
    return 1.0 / (m.n_s * E * m.mu)


def cavity_scattering_rate(B, r: ResonatorParams, m: MaterialParams):
    """Vacuum-induced scattering rate [1/s].

    (1/tau_p) (2 Omega)^2 / ((f_mp - f_cav)^2 + (2 Omega)^2 + kappa^2): largest at
    the anti-crossing, identically zero when eta = 0.
    """
    f_mp = magneto_plasmon_frequency(B, r, m)
    g2 = (2.0 * r.coupling) ** 2
    rate = g2 / ((f_mp - r.f_cav) ** 2 + g2 + r.linewidth**2) / r.tau_p
    return rate.item() if np.ndim(rate) == 0 else rate


def thermal_factor(B, m: MaterialParams):
    """Lifshitz-Kosevich X / sinh X with X = 2 pi^2 kB T / (hbar w_c)."""
    w_c = 2.0 * math.pi * np.asarray(cyclotron_frequency(B, m))
    X = 2.0 * math.pi**2 * KB * m.T_el / (HBAR * w_c)
    with np.errstate(over="ignore"):
        out = np.where(X > 0, X / np.sinh(np.where(X > 0, X, 1.0)), 1.0)
    return out


def dingle_factor(B, m: MaterialParams, extra_rate=0.0):
    """exp(-pi / (w_c tau_eff)) with 1/tau_eff = 1/tau_q + extra_rate."""
    w_c = 2.0 * math.pi * np.asarray(cyclotron_frequency(B, m))
    inv_tau = 1.0 / m.tau_q + extra_rate
    return np.exp(-math.pi * inv_tau / w_c)


def _rho(B, m, rate):
    B = np.asarray(B, dtype=float)
    if np.any(~(B > 0)):
        raise ParameterError("resistivity needs B > 0 T everywhere")
    nu = filling_factor(B, m)
    amp = 4.0 * thermal_factor(B, m) * dingle_factor(B, m, rate)
    # minima at integer nu
    return np.maximum(drude_rho0(m) * (1.0 - amp * np.cos(2.0 * math.pi * nu)), 0.0)


def rho_xx(B, r: ResonatorParams | None, m: MaterialParams):
    """rho_xx(B) [ohm], clipped at zero. ``r=None`` gives the bare Hall bar."""
    rate = 0.0 if r is None else cavity_scattering_rate(B, r, m)
    return _rho(B, m, rate)


def sdh_envelope(B, r: ResonatorParams | None, m: MaterialParams):
    """Oscillation amplitude 4 rho0 A_T A_D [ohm] before clipping."""
    rate = 0.0 if r is None else cavity_scattering_rate(B, r, m)
    return 4.0 * drude_rho0(m) * thermal_factor(B, m) * dingle_factor(B, m, rate)


def rho_xx_dark(b_axis: Grid1D, r: ResonatorParams | None, m: MaterialParams) -> TransportTrace:
    if not b_axis.start > 0:
        raise ParameterError("b_axis must start above 0 T")
    rho = rho_xx(b_axis.values(), r, m)
    return TransportTrace(b_axis, rho, m, r, 0.0 if r is None else r.eta)


def resistivity_from_voltage(V_xx, I, m: MaterialParams):
    """rho_xx = V_xx W / (I L) for the four-probe geometry [ohm]."""
    return V_xx * m.W / (I * m.L)
