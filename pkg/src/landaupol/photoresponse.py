"""Photo-response maps R(B, f) = (rho_illu - rho_dark) / P_irr under weak irradiation.

Two channels, gated by where E_F sits in the Landau ladder:

* delocalized states (half-integer nu) respond negatively on the polariton
  branches, weighted by each branch's matter fraction;
* localized states (integer nu) respond positively on the inter-Landau-level
  line f = f_c and its harmonics n f_c.

Also locates the non-radiative decay loci where a polariton branch meets an
inter-level harmonic, and estimates the steady-state polariton number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .grids import Grid1D, ResponseMap
from .landau import cyclotron_frequency, filling_factor, localization_weights
from .params import MaterialParams, ParameterError, ResonatorParams
from .polariton import branch_linewidths, branches, lorentzian

UNITS = "ohm per unit normalized power"


class FillingSliceError(ValueError):
    pass


@dataclass(frozen=True)
class PhotoResponseParams:
    """Channel amplitudes [ohm] and the inter-level half-width gamma_LL [Hz]."""

    A_pol: float = -2.0
    A_1: float = 1.0
    A_hi: float = 0.3
    n_max_harmonic: int = 4
    gamma_LL: float = 10e9

    def __post_init__(self):
        if not (self.A_pol < 0 < self.A_hi <= self.A_1):
            raise ParameterError("need A_pol < 0 < A_hi <= A_1")
        if int(self.n_max_harmonic) != self.n_max_harmonic or self.n_max_harmonic < 1:
            raise ParameterError("n_max_harmonic must be an integer >= 1")
        if not self.gamma_LL > 0:
            raise ParameterError("gamma_LL must be > 0")

    def amplitude(self, n: int) -> float:
        return self.A_1 if n == 1 else self.A_hi


def polariton_term(B, f, kind, r: ResonatorParams, m: MaterialParams, p: PhotoResponseParams):
    """sum_j A_pol w_mat_j L(f - f_j; kappa_j/2); B and f broadcast together."""
    br = branches(np.asarray(B, dtype=float), kind, r, m)
    k_lp, k_up = branch_linewidths(br, r, m)
    out = p.A_pol * br.w_mat_lp * lorentzian(f - br.f_lp, 0.5 * k_lp)
    return out + p.A_pol * br.w_mat_up * lorentzian(f - br.f_up, 0.5 * k_up)


def harmonic_term(B, f, m: MaterialParams, p: PhotoResponseParams):
    """sum_{n=1}^{n_max} A_n L(f - n f_c; gamma_LL)."""
    f_c = np.asarray(cyclotron_frequency(B, m))
    out = 0.0
    for n in range(1, p.n_max_harmonic + 1):
        out = out + p.amplitude(n) * lorentzian(f - n * f_c, p.gamma_LL)
    return out


def photoresponse(B, f, kind, r: ResonatorParams, m: MaterialParams, p: PhotoResponseParams):
    """R(B, f) for broadcastable B [T] (> 0) and f [Hz]."""
    w_deloc, w_loc = localization_weights(filling_factor(B, m))
    return w_deloc * polariton_term(B, f, kind, r, m, p) + w_loc * harmonic_term(B, f, m, p)


def photoresponse_map(
    b_axis: Grid1D,
    f_axis: Grid1D,
    kind,
    r: ResonatorParams,
    m: MaterialParams,
    p: PhotoResponseParams | None = None,
) -> ResponseMap:
    if p is None:
        p = PhotoResponseParams()
    if not b_axis.start > 0:
        raise ParameterError("b_axis must start above 0 T")
    B = b_axis.values()[:, None]
    f = f_axis.values()[None, :]
    R = np.broadcast_to(photoresponse(B, f, kind, r, m, p), (b_axis.count, f_axis.count))
    return ResponseMap(b_axis, f_axis, np.array(R), quantity="photoresponse", units=UNITS)


def filling_distance(nu, which: str):
    nu = np.asarray(nu, dtype=float)
    if which == "integer":
        return np.abs(nu - np.round(nu))
    if which == "half_integer":
        return np.abs(nu - np.floor(nu) - 0.5)
    raise ValueError(f"which must be 'integer' or 'half_integer', got {which!r}")


def slice_by_filling(rmap: ResponseMap, m: MaterialParams, which: str, tol: float) -> ResponseMap:
    """Keep B rows near integer or half-integer filling, linearly interpolating
    the kept rows back onto the full B axis (constant beyond the outermost rows).
    """
    B = rmap.b_axis.values()
    if not B[0] > 0:
        raise FillingSliceError("B axis must be positive")
    nu = filling_factor(B, m)
    if math.floor(nu.max()) - math.ceil(nu.min()) < 1:
        raise FillingSliceError("B axis must span at least two integer filling factors")
    keep = np.flatnonzero(filling_distance(nu, which) <= tol)
    if keep.size == 0:
        raise FillingSliceError(f"no B rows within {tol} of {which.replace('_', '-')} filling")
    kept = rmap.values[keep]
    out = np.empty_like(rmap.values)
    for j in range(out.shape[1]):
        out[:, j] = np.interp(B, B[keep], kept[:, j])
    return ResponseMap(rmap.b_axis, rmap.f_axis, out, quantity=rmap.quantity, units=rmap.units)


@dataclass(frozen=True)
class DecayLocus:
    n: int
    branch: str  # "LP" or "UP"
    B_star: float
    f_star: float


def _bisect(g, lo, hi, rtol, max_iter=200):
    """Vectorized bisection on brackets with g(lo) * g(hi) < 0."""
    glo = g(lo)
    for _ in range(max_iter):
        if np.all(hi - lo <= rtol * np.abs(0.5 * (lo + hi))):
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        left = np.sign(gm) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gm, glo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def decay_loci(
    kind,
    r: ResonatorParams,
    m: MaterialParams,
    n_range=(2, 4),
    B_range=(0.01, 1.5),
    n_scan: int = 20001,
    rtol: float = 1e-10,
):
    """Fields where a polariton branch meets the n-th inter-level harmonic.

    For each n in [n_range[0], n_range[1]] and each branch, sign changes of
    f_branch(B) - n f_c(B) on an ``n_scan`` grid over ``B_range`` are refined by
    bisection to relative ``rtol`` in B. Crossings on a purely photonic branch
    (possible only at eta = 0) are dropped. Returns loci sorted by (B_star, n).
    """
    n_lo, n_hi = n_range
    if n_lo < 2:
        raise ParameterError("harmonic index must be >= 2")
    b_lo, b_hi = B_range
    if not 0 < b_lo < b_hi:
        raise ParameterError("B_range must be positive and increasing")
    Bs = np.linspace(b_lo, b_hi, n_scan)
    f_c1 = cyclotron_frequency(1.0, m)
    br = branches(Bs, kind, r, m)
    found = []
    for name, attr in (("LP", "f_lp"), ("UP", "f_up")):
        f_br = getattr(br, attr)
        for n in range(n_lo, n_hi + 1):

            def g(B, n=n, attr=attr):
                return getattr(branches(B, kind, r, m), attr) - n * f_c1 * B

            vals = f_br - n * f_c1 * Bs
            exact = np.flatnonzero(vals == 0.0)
            idx = np.flatnonzero(vals[:-1] * vals[1:] < 0)
            roots = list(Bs[exact])
            if idx.size:
                roots.extend(_bisect(g, Bs[idx], Bs[idx + 1], rtol))
            for b in roots:
                # a bare photon (zero matter weight) has no electronic decay channel
                if getattr(branches(b, kind, r, m), "w_mat_" + name.lower()) == 0.0:
                    continue
                found.append(DecayLocus(n, name, float(b), float(n * f_c1 * b)))
    found.sort(key=lambda d: (d.B_star, d.n, d.branch))
    return found


def estimate_polariton_population(P_irr: float, r: ResonatorParams, absorbed_fraction: float = 1.0) -> float:
    """Steady-state polariton number a P tau / (hbar w_cav) with tau = Q / w_cav."""
    if P_irr < 0:
        raise ParameterError("P_irr must be >= 0")
    if not 0 <= absorbed_fraction <= 1:
        raise ParameterError("absorbed_fraction must lie in [0, 1]")
    w = 2.0 * math.pi * r.f_cav
    return absorbed_fraction * P_irr * (r.Q / w) / (HBAR * w)
