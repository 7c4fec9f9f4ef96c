"""Landau quantization of the 2DEG: cyclotron frequency, filling factor, level
ladder with Lorentzian broadening, and the localized/delocalized split at E_F.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .constants import E, H, HBAR
from .params import MaterialParams, ParameterError


def _positive_field(B, name="B"):
    B = np.asarray(B, dtype=float)
    if np.any(~(B > 0)):
        raise ParameterError(f"{name} must be > 0 T")
    return B


def _scalar_or_array(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def cyclotron_frequency(B, m: MaterialParams):
    """f_c = e B / (2 pi m*) [Hz]. Accepts scalars or arrays, B >= 0."""
    B = np.asarray(B, dtype=float)
    if np.any(~(B >= 0)):
        raise ParameterError("B must be >= 0 T")
    return _scalar_or_array(E * B / (2.0 * math.pi * m.m_star))


def filling_factor(B, m: MaterialParams):
    """Spin-degenerate filling factor nu = h n_s / (2 e B)."""
    B = _positive_field(B)
    return _scalar_or_array(H * m.n_s / (2.0 * E * B))


def magnetic_length(B):
    """SI magnetic length sqrt(hbar / (e B)) [m]."""
    B = _positive_field(B)
    return _scalar_or_array(np.sqrt(HBAR / (E * B)))


def dipole_scale(B, m: MaterialParams):
    """Extended-state dipole length l0 * sqrt(nu) [m]; multiply by e for a dipole."""
    return _scalar_or_array(np.asarray(magnetic_length(B)) * np.sqrt(filling_factor(B, m)))


def level_degeneracy(B):
    """Spin-degenerate states per level per area, 2 e B / h [m^-2]."""
    return 2.0 * E * np.asarray(B, dtype=float) / H


def _snap_mantissa(x: float, n_max: int) -> float:
    # keep few enough mantissa bits that (2n+1) * x/2 is exact for n <= n_max
    k = (2 * n_max + 1).bit_length()
    frac, ex = math.frexp(x)
    bits = 53 - k
    return math.ldexp(round(frac * 2.0**bits), ex - bits)


@dataclass(frozen=True, eq=False)
class LandauSpectrum:
    """Level ladder E_n = hbar w_c (n + 1/2), n = 0..n_max, with FWHM gamma = hbar / tau_q.

    ``spacing`` is hbar w_c rounded by < 1e-12 relative so that every
    E_{n+1} - E_n equals it exactly in floating point.
    """

    B: float
    f_c: float
    spacing: float
    level_energies: np.ndarray
    gamma: float

    @classmethod
    def build(cls, B: float, m: MaterialParams, n_max: int = 200) -> "LandauSpectrum":
        if not B > 0:
            raise ParameterError("B must be > 0 T")
        if n_max < 0:
            raise ParameterError("n_max must be >= 0")
        f_c = cyclotron_frequency(B, m)
        spacing = _snap_mantissa(HBAR * 2.0 * math.pi * f_c, n_max)
        n = np.arange(n_max + 1, dtype=float)
        levels = (2.0 * n + 1.0) * (spacing / 2.0)
        return cls(float(B), f_c, spacing, levels, HBAR / m.tau_q)

    @property
    def n_max(self) -> int:
        return len(self.level_energies) - 1


def dos_at_energy(E_J, spec: LandauSpectrum, m: MaterialParams | None = None):
    """Spin-degenerate Lorentzian-broadened DOS [states / (J m^2)].

    g(E) = (2eB/h) * sum_n (1/pi) (G/2) / ((E - E_n)^2 + (G/2)^2).
    Levels are summed explicitly up to ceil(E/(hbar w_c)) + 50 (padding ``spec``
    if shorter); the remaining upper tail is added in closed form via the
    trigamma function, (G/2)/pi * psi'(N + 3/2 - E/(hbar w_c)) / (hbar w_c)^2.
    """
    E_J = np.asarray(E_J, dtype=float)
    need = int(math.ceil(float(np.max(E_J, initial=0.0)) / spec.spacing)) + 50
    if spec.n_max < need:
        n = np.arange(need + 1, dtype=float)
        levels = (2.0 * n + 1.0) * (spec.spacing / 2.0)
    else:
        levels = spec.level_energies
    hw = spec.gamma / 2.0
    d = E_J[..., None] - levels
    lor = (hw / math.pi) / (d * d + hw * hw)
    n_top = len(levels) - 1
    # levels n > n_top sit >= 50 spacings away, where hw^2 is negligible next to d^2
    tail = (hw / math.pi) * polygamma(1, n_top + 1.5 - E_J / spec.spacing) / spec.spacing**2
    return _scalar_or_array(level_degeneracy(spec.B) * (lor.sum(axis=-1) + tail))


def localization_weights(nu):
    """(w_deloc, w_loc) = (sin^2(pi nu), cos^2(pi nu)).

    w_deloc is 1 at half-integer nu (E_F at a level centre) and 0 at integer nu.
    """
    nu = np.asarray(nu, dtype=float)
    frac = nu - np.floor(nu)
    s = np.sin(math.pi * frac)
    c = np.cos(math.pi * frac)
    return _scalar_or_array(s * s), _scalar_or_array(c * c)


@dataclass(frozen=True)
class FermiState:
    nu: float
    E_F: float
    w_deloc: float
    w_loc: float


def fermi_state(B, m: MaterialParams) -> FermiState:
    """Filling, Fermi energy and localization weights at field B.

    E_F = nu hbar w_c, the fixed-density value pi hbar^2 n_s / m*; at half-integer
    nu it sits on a level centre. DOS-driven pinning of E_F is ignored.
    """
    nu = filling_factor(B, m)
    E_F = HBAR * 2.0 * math.pi * np.asarray(cyclotron_frequency(B, m)) * np.asarray(nu)
    w_d, w_l = localization_weights(nu)
    return FermiState(nu, _scalar_or_array(E_F), w_d, w_l)
