"""Magneto-plasmon polariton branches and synthetic THz transmission maps.

Two branch models are provided:

* ``COUPLED_MODE`` -- the 2x2 rotating-wave model, eigenvalues of
  [[f_cav, Omega], [Omega, f_mp]].
* ``HOPFIELD`` -- the ultrastrong-coupling secular equation including the
  diamagnetic term, f^4 - f^2 (f_cav^2 + f_mp^2 + 4 Omega^2) + f_cav^2 f_mp^2 = 0,
  which opens a gap f_UP(0) = sqrt(f_cav^2 + 4 Omega^2) at f_mp = 0.

Omega = eta * f_cav unless a ``coupling`` callable B -> Omega(B) [Hz] is passed.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields

import numpy as np

from .grids import Grid1D, ResponseMap
from .landau import cyclotron_frequency
from .params import MaterialParams, ResonatorParams


class PolaritonModelKind(str, enum.Enum):
    COUPLED_MODE = "coupled"
    HOPFIELD = "hopfield"


@dataclass(frozen=True, eq=False)
class Branches:
    """Lower/upper polariton frequencies [Hz] and photon/matter weights.

    Fields are scalars for a single field value, arrays for a sweep.
    """

    B: np.ndarray
    f_mp: np.ndarray
    f_lp: np.ndarray
    f_up: np.ndarray
    w_phot_lp: np.ndarray
    w_phot_up: np.ndarray
    w_mat_lp: np.ndarray
    w_mat_up: np.ndarray

    def point(self, i) -> "Branches":
        return Branches(*(np.asarray(getattr(self, f.name))[i] for f in fields(self)))

    def __len__(self):
        return np.size(self.B)


def magneto_plasmon_frequency(B, r: ResonatorParams, m: MaterialParams):
    """Confined-2DEG magneto-plasmon sqrt(f_c^2 + f_p^2) [Hz]."""
    return np.hypot(cyclotron_frequency(B, m), r.f_p)


def _coupling(B, r, coupling):
    if coupling is None:
        return np.full(np.shape(B), r.coupling)
    return np.asarray(coupling(B), dtype=float)


def photon_weight(f, f_cav, omega):
    """Photonic fraction omega^2 / (omega^2 + (f - f_cav)^2) of a branch at f."""
    f = np.asarray(f, dtype=float)
    o2 = np.asarray(omega, dtype=float) ** 2
    d2 = (f - f_cav) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        w = o2 / (o2 + d2)
    # decoupled limit: the branch sitting on the cavity is pure photon
    return np.where(o2 == 0.0, (d2 == 0.0).astype(float), w)


def _pack(B, f_mp, f_lp, f_up, f_cav, omega):
    wl = photon_weight(f_lp, f_cav, omega)
    wu = photon_weight(f_up, f_cav, omega)
    # decoupled: exactly one branch is the bare cavity, whichever sits nearer f_cav
    lp_is_cav = np.abs(f_lp - f_cav) <= np.abs(f_up - f_cav)
    free = np.asarray(omega) == 0.0
    wl = np.where(free, lp_is_cav, wl).astype(float)
    wu = np.where(free, ~lp_is_cav, wu).astype(float)
    vals = [B, f_mp, f_lp, f_up, wl, wu, 1.0 - wl, 1.0 - wu]
    if np.ndim(B) == 0:
        vals = [float(v) for v in vals]
    return Branches(*vals)


def branch_frequencies(kind, f_cav, f_mp, omega):
    """(f_lp, f_up) [Hz] from bare frequencies and coupling, arrays broadcast."""
    if kind is PolaritonModelKind.COUPLED_MODE or kind == "coupled":
        f_up = 0.5 * (f_cav + f_mp + np.hypot(f_cav - f_mp, 2.0 * omega))
        # determinant f_cav f_mp - omega^2 = f_lp f_up, free of cancellation
        with np.errstate(invalid="ignore", divide="ignore"):
            f_lp = np.where(f_up > 0.0, (f_cav * f_mp - omega * omega) / f_up, 0.0)
        return np.minimum(f_lp, f_up), f_up
    a = f_cav**2
    b = f_mp**2
    c = 4.0 * omega**2
    # (a+b+c)^2 - 4ab written as a sum of non-negative terms
    disc = (a - b) ** 2 + 2.0 * c * (a + b) + c**2
    assert np.all(disc >= 0.0)
    f_up = np.sqrt(0.5 * (a + b + c + np.sqrt(disc)))
    # Vieta product avoids cancellation in the small root
    with np.errstate(invalid="ignore", divide="ignore"):
        f_lp = np.where(f_up > 0.0, f_cav * f_mp / f_up, 0.0)
    return np.minimum(f_lp, f_up), f_up


def _branches(kind, B, r, m, coupling):
    B = np.asarray(B, dtype=float)
    f_mp = magneto_plasmon_frequency(B, r, m)
    om = _coupling(B, r, coupling)
    f_lp, f_up = branch_frequencies(kind, r.f_cav, f_mp, om)
    return _pack(B, f_mp, f_lp, f_up, r.f_cav, om)


def branches_coupled_mode(B, r: ResonatorParams, m: MaterialParams, coupling=None) -> Branches:
    """Eigenfrequencies of the 2x2 coupled-mode matrix.

    f_pm = (f_cav + f_mp)/2 +- sqrt((f_cav - f_mp)^2 + 4 Omega^2)/2. The lower
    branch is positive only while Omega^2 < f_cav f_mp.
    """
    return _branches(PolaritonModelKind.COUPLED_MODE, B, r, m, coupling)


def branches_hopfield(B, r: ResonatorParams, m: MaterialParams, coupling=None) -> Branches:
    """Positive roots of the Hopfield quartic with the diamagnetic term folded in."""
    return _branches(PolaritonModelKind.HOPFIELD, B, r, m, coupling)


def branches(B, kind, r: ResonatorParams, m: MaterialParams, coupling=None) -> Branches:
    return _branches(PolaritonModelKind(kind), B, r, m, coupling)


def dispersion_sweep(b_axis: Grid1D, kind, r: ResonatorParams, m: MaterialParams, coupling=None) -> Branches:
    """Branches at every sample of ``b_axis`` (start >= 0)."""
    return branches(b_axis.values(), kind, r, m, coupling)


def anticrossing_field(r: ResonatorParams, m: MaterialParams) -> float:
    """Field [T] where the magneto-plasmon meets the cavity, f_mp(B) = f_cav.

    Returns nan when f_p >= f_cav (no crossing at B > 0).
    """
    if r.f_p >= r.f_cav:
        return math.nan
    f_c = math.sqrt(r.f_cav**2 - r.f_p**2)
    return f_c / cyclotron_frequency(1.0, m)


def branch_linewidths(br: Branches, r: ResonatorParams, m: MaterialParams):
    """FWHM [Hz] of each branch: photon-weighted f_cav/Q plus matter-weighted Gamma/h.

    Gamma/h = 1/(2 pi tau_q).
    """
    g_mat = 1.0 / (2.0 * math.pi * m.tau_q)
    k_lp = r.linewidth * br.w_phot_lp + g_mat * br.w_mat_lp
    k_up = r.linewidth * br.w_phot_up + g_mat * br.w_mat_up
    return k_lp, k_up


def lorentzian(x, half_width):
    """Unit-peak Lorentzian 1 / (1 + (x / half_width)^2)."""
    u = x / half_width
    return 1.0 / (1.0 + u * u)


def transmission_map(
    b_axis: Grid1D,
    f_axis: Grid1D,
    kind,
    r: ResonatorParams,
    m: MaterialParams,
    depth: float = 0.8,
    coupling=None,
) -> ResponseMap:
    """Synthetic THz transmission T(B, f) in [0, 1].

    T = 1 - sum_j depth * w_phot_j * L(f - f_j; kappa_j / 2) with unit-peak
    Lorentzians L. Independent of n_s (and hence of filling) by construction.
    """
    B = b_axis.values()
    br = branches(B, kind, r, m, coupling)
    k_lp, k_up = branch_linewidths(br, r, m)
    f = f_axis.values()[None, :]
    dip = depth * br.w_phot_lp[:, None] * lorentzian(f - br.f_lp[:, None], 0.5 * k_lp[:, None])
    dip = dip + depth * br.w_phot_up[:, None] * lorentzian(f - br.f_up[:, None], 0.5 * k_up[:, None])
    T = np.clip(1.0 - dip, 0.0, 1.0)
    return ResponseMap(b_axis, f_axis, T, quantity="transmission", units="1")
