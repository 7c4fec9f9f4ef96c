"""Parameter extraction from transmission data.

* ``extract_peaks`` turns a transmission map into (B, f) dip positions.
* ``fit_dispersion`` fits (f_cav, eta, m*/m_e, f_p) to those points with a
  multi-start Nelder-Mead on the nearest-branch residual, and estimates
  uncertainties with a residual bootstrap.
* ``fit_quality_factor`` fits a single Lorentzian dip and returns Q = f0 / FWHM.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares, minimize
from scipy.signal import find_peaks

from .constants import E, GHZ, M_E
from .grids import ResponseMap
from .params import MaterialParams, ResonatorParams
from .polariton import PolaritonModelKind, branch_frequencies, branches

PARAM_NAMES = ("f_cav", "eta", "m_star_ratio", "f_p")


class FitError(ValueError):
    pass


class QFitError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PeakList:
    """Dip positions B [T], f [Hz] with positive weights normalized to mean 1."""

    B: np.ndarray
    f: np.ndarray
    weight: np.ndarray = None
    source: str = ""

    def __post_init__(self):
        B = np.asarray(self.B, dtype=float).ravel()
        f = np.asarray(self.f, dtype=float).ravel()
        w = np.ones_like(B) if self.weight is None else np.asarray(self.weight, dtype=float).ravel()
        if not (len(B) == len(f) == len(w)):
            raise FitError("B, f and weight must have equal lengths")
        if np.any(~(B > 0)) or np.any(~(f > 0)) or np.any(~(w > 0)):
            raise FitError("peak B, f and weight must all be > 0")
        # already-normalized weights are kept as-is so file round trips are exact
        if len(w) and abs(w.mean() - 1.0) > 1e-12:
            w = w / w.mean()
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "weight", w)

    def __len__(self):
        return len(self.B)


@dataclass(frozen=True)
class Theta:
    """Dispersion parameters: f_cav [Hz], eta, m_star_ratio, f_p [Hz]."""

    f_cav: float = 205e9
    eta: float = 0.2
    m_star_ratio: float = 0.067
    f_p: float = 60e9

    def as_array(self) -> np.ndarray:
        return np.array([self.f_cav, self.eta, self.m_star_ratio, self.f_p])

    @classmethod
    def from_array(cls, x) -> "Theta":
        return cls(*(float(v) for v in x))

    @classmethod
    def from_params(cls, r: ResonatorParams, m: MaterialParams) -> "Theta":
        return cls(r.f_cav, r.eta, m.m_star_ratio, r.f_p)

    def apply(self, r: ResonatorParams, m: MaterialParams):
        """(ResonatorParams, MaterialParams) with this theta substituted."""
        return (
            replace(r, f_cav=self.f_cav, eta=self.eta, f_p=self.f_p),
            replace(m, m_star=self.m_star_ratio * M_E),
        )


DEFAULT_BOUNDS = (
    Theta(f_cav=50e9, eta=0.0, m_star_ratio=0.03, f_p=0.0),
    Theta(f_cav=700e9, eta=1.0, m_star_ratio=0.15, f_p=300e9),
)


@dataclass(frozen=True, eq=False)
class FitResult:
    theta: Theta
    rss: float  # Hz^2, weighted
    n_points: int
    uncertainty: Theta  # bootstrap 95% half-widths, same units as theta
    converged: bool
    n_restarts_used: int
    kind: str = "hopfield"
    bootstrap: np.ndarray = field(default=None, repr=False)

    @property
    def eta(self) -> float:
        return self.theta.eta


# --- peak extraction ---------------------------------------------------------


def parabolic_vertex(y_m, y_0, y_p):
    """Offset (in grid steps, within [-1/2, 1/2] for a true extremum) of the
    parabola through three equally spaced samples."""
    den = y_m - 2.0 * y_0 + y_p
    if den == 0:
        return 0.0
    return 0.5 * (y_m - y_p) / den


def lorentzian_vertex(d_m, d_0, d_p):
    """Centre offset [steps] of a dip from three depths 1 - T around the deepest sample.

    1/depth of a Lorentzian is a parabola in f, so the vertex of the parabola
    through the reciprocal depths is exact for an isolated line on a unit baseline.
    Falls back to the plain parabola when a depth is not positive.
    """
    if min(d_m, d_0, d_p) <= 0:
        return parabolic_vertex(-d_m, -d_0, -d_p)
    return parabolic_vertex(1.0 / d_m, 1.0 / d_0, 1.0 / d_p)


def extract_peaks(rmap: ResponseMap, threshold: float = 0.1, min_prominence: float = 0.02) -> PeakList:
    """Per-B dips of T(f) with depth >= threshold and prominence >= min_prominence.

    Dip centres are refined by 3-point parabolic interpolation of the reciprocal
    depth (exact for a Lorentzian on a unit baseline); at most the two
    deepest dips per B row are kept. Rows at B <= 0 are skipped. Weights are uniform.
    """
    T = np.asarray(rmap.values, dtype=float)
    if T.ndim != 2 or T.shape != (rmap.b_axis.count, rmap.f_axis.count):
        raise FitError("malformed map")
    if not np.all(np.isfinite(T)) or T.min() < 0 or T.max() > 1:
        raise FitError("transmission values must lie in [0, 1]")
    B = rmap.b_axis.values()
    f0, df = rmap.f_axis.start, rmap.f_axis.step
    out_B, out_f = [], []
    for i, row in enumerate(T):
        if not B[i] > 0:
            continue
        depth = 1.0 - row
        idx, props = find_peaks(depth, height=threshold, prominence=min_prominence)
        if idx.size == 0:
            continue
        order = np.argsort(-props["peak_heights"], kind="stable")[:2]
        for k in sorted(idx[order]):
            off = lorentzian_vertex(depth[k - 1], depth[k], depth[k + 1])
            out_B.append(B[i])
            out_f.append(f0 + (k + off) * df)
    return PeakList(np.array(out_B), np.array(out_f), source="extract_peaks")


# --- dispersion fit ----------------------------------------------------------


class _Objective:
    """Weighted nearest-branch RSS, evaluated in GHz^2 for conditioning."""

    def __init__(self, peaks: PeakList, kind, r: ResonatorParams, m: MaterialParams):
        self.B = peaks.B
        self.f = peaks.f / GHZ
        self.w = peaks.weight
        self.kind = PolaritonModelKind(kind)
        # f_c [GHz] = fc_unit * B / m_star_ratio
        self.fc_unit = E / (2.0 * math.pi * M_E) / GHZ

    def model(self, x, f_obs=None):
        """Nearest-branch prediction [GHz]; x = (f_cav, eta, m_star_ratio, f_p) in SI."""
        f_cav = x[0] / GHZ
        f_mp = np.hypot(self.fc_unit * self.B / x[2], x[3] / GHZ)
        lp, up = branch_frequencies(self.kind, f_cav, f_mp, x[1] * f_cav)
        f_obs = self.f if f_obs is None else f_obs
        return np.where(np.abs(f_obs - lp) <= np.abs(f_obs - up), lp, up)

    def rss(self, x, f_obs=None) -> float:
        f_obs = self.f if f_obs is None else f_obs
        res = f_obs - self.model(x, f_obs)
        return float(np.dot(self.w, res * res))


class _BoxMap:
    """Affine map between parameters and the unit box, honouring fixed entries."""

    def __init__(self, lo: np.ndarray, hi: np.ndarray, base: np.ndarray, free: np.ndarray):
        self.lo, self.hi, self.base, self.free = lo, hi, base, free

    def to_x(self, u) -> np.ndarray:
        x = self.base.copy()
        x[self.free] = self.lo[self.free] + u * (self.hi[self.free] - self.lo[self.free])
        return x

    def to_theta(self, u) -> Theta:
        return Theta.from_array(self.to_x(np.asarray(u)))

    def to_unit(self, theta: Theta) -> np.ndarray:
        x = theta.as_array()
        return (x[self.free] - self.lo[self.free]) / (self.hi[self.free] - self.lo[self.free])


def _simplex_fit(fun, u0, xatol=1e-10, fatol=1e-10):
    n = len(u0)
    return minimize(
        fun,
        np.clip(u0, 0.0, 1.0),
        method="Nelder-Mead",
        bounds=[(0.0, 1.0)] * n,
        options={"xatol": xatol, "fatol": fatol, "maxiter": 4000 * n, "maxfev": 8000 * n, "adaptive": n > 2},
    )


def _converged(res, box: _BoxMap) -> bool:
    sim = res.final_simplex[0]
    span = box.hi[box.free] - box.lo[box.free]
    diam = (sim.max(axis=0) - sim.min(axis=0)) * span
    x = box.lo[box.free] + sim[0] * span
    return bool(np.all(diam <= 1e-6 * np.maximum(np.abs(x), 1e-3 * span)))


def fit_dispersion(
    peaks: PeakList,
    kind="hopfield",
    theta0: Theta | None = None,
    bounds: tuple[Theta, Theta] = DEFAULT_BOUNDS,
    *,
    fixed=(),
    n_starts: int = 8,
    n_bootstrap: int = 200,
    seed: int = 0,
    r: ResonatorParams | None = None,
    m: MaterialParams | None = None,
) -> FitResult:
    """Least-squares fit of a branch model to dip positions.

    Minimizes sum_i w_i (f_i - nearest_branch(B_i))^2 from ``theta0`` plus
    ``n_starts`` seeded uniform draws in ``bounds``; names in ``fixed`` are
    held at their ``theta0`` value. Non-fitted resonator/material fields come
    from ``r`` and ``m`` (defaults otherwise).
    """
    if len(peaks) < 4:
        raise FitError(f"need at least 4 peaks, got {len(peaks)}")
    if n_starts < 1:
        raise FitError("n_starts must be >= 1")
    unknown = set(fixed) - set(PARAM_NAMES)
    if unknown:
        raise FitError(f"unknown fixed parameter(s): {sorted(unknown)}")
    r = ResonatorParams() if r is None else r
    m = MaterialParams() if m is None else m
    theta0 = Theta.from_params(r, m) if theta0 is None else theta0
    lo, hi = bounds[0].as_array(), bounds[1].as_array()
    if np.any(lo >= hi):
        raise FitError("bounds must satisfy lower < upper")
    free = np.array([name not in fixed for name in PARAM_NAMES])
    box = _BoxMap(lo, hi, theta0.as_array(), free)
    obj = _Objective(peaks, kind, r, m)

    def fun(u):
        return obj.rss(box.to_x(u))

    rng = np.random.default_rng(seed)
    starts = [box.to_unit(theta0)] + list(rng.uniform(0.0, 1.0, size=(n_starts, int(free.sum()))))
    # coarse simplex from every start, then polish the best one
    best = None
    for res in (_simplex_fit(fun, u, xatol=1e-5, fatol=1e-6) for u in starts):
        # strict '<' keeps the lowest start index on ties
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        nan = Theta(math.nan, math.nan, math.nan, math.nan)
        return FitResult(theta0, math.inf, len(peaks), nan, False, len(starts), PolaritonModelKind(kind).value)
    polished = _simplex_fit(fun, best.x)
    if polished.fun <= best.fun:
        best = polished
    best_ok = _converged(best, box)
    theta = box.to_theta(best.x)

    boot = None
    unc = np.zeros(4)
    if n_bootstrap > 0:
        fitted = obj.model(theta.as_array())
        resid = obj.f - fitted
        brng = np.random.default_rng([seed, 1])
        boot = np.empty((n_bootstrap, 4))
        for b in range(n_bootstrap):
            f_star = fitted + resid[brng.integers(0, len(resid), len(resid))]
            res = _simplex_fit(lambda u: obj.rss(box.to_x(u), f_star), best.x, xatol=1e-6, fatol=1e-8)
            boot[b] = box.to_theta(res.x).as_array()
        q_lo, q_hi = np.percentile(boot, [2.5, 97.5], axis=0)
        unc = 0.5 * (q_hi - q_lo)
    return FitResult(
        theta=theta,
        rss=float(best.fun) * GHZ**2,
        n_points=len(peaks),
        uncertainty=Theta.from_array(unc),
        converged=best_ok,
        n_restarts_used=len(starts),
        kind=PolaritonModelKind(kind).value,
        bootstrap=boot,
    )


def synthesize_peaks(B, theta: Theta, kind="coupled", noise_hz=0.0, seed=None, r=None, m=None) -> PeakList:
    """Both branches at every B, optionally with Gaussian frequency noise [Hz]."""
    r = ResonatorParams() if r is None else r
    m = MaterialParams() if m is None else m
    r, m = theta.apply(r, m)
    B = np.asarray(B, dtype=float)
    br = branches(B, kind, r, m)
    Bs = np.concatenate([B, B])
    fs = np.concatenate([br.f_lp, br.f_up])
    if noise_hz:
        fs = fs + np.random.default_rng(seed).normal(0.0, noise_hz, fs.shape)
    return PeakList(Bs, fs, source="synthetic")


# --- quality factor ----------------------------------------------------------


@dataclass(frozen=True)
class QFit:
    Q: float
    f0: float  # Hz
    half_width: float  # Hz
    depth: float
    baseline: float
    resolved: bool


def _dip(f, f0, hw, depth, base):
    u = (f - f0) / hw
    return base - depth / (1.0 + u * u)


def fit_quality_factor(f, T) -> QFit:
    """Lorentzian dip fit on a 1D cut; Q = f0 / (2 * half_width).

    When the fitted FWHM is below the sampling step the dip is unresolved:
    ``resolved`` is False and Q is reported as at least f0 / step.
    """
    f = np.asarray(f, dtype=float)
    T = np.asarray(T, dtype=float)
    if f.ndim != 1 or f.shape != T.shape or len(f) < 5:
        raise QFitError("need matching 1D f and T with >= 5 samples")
    if np.any(np.diff(f) <= 0):
        raise QFitError("frequencies must be strictly increasing")
    scale = GHZ
    x = f / scale
    step = float(np.min(np.diff(x)))
    k = int(np.argmin(T))
    base0 = float(np.max(T))
    depth0 = base0 - float(T[k])
    if depth0 <= 0:
        raise QFitError("no dip in cut")
    half = T[k] + 0.5 * depth0
    above = np.flatnonzero(T <= half)
    if above.size < 2:
        # a single sample below half depth: the width is below the grid resolution
        return QFit(float(f[k] / step / scale), float(f[k]), 0.5 * step * scale, depth0, base0, False)
    hw0 = max(0.5 * (x[above[-1]] - x[above[0]]), step)
    span = x[-1] - x[0]
    try:
        res = least_squares(
            lambda p: _dip(x, *p) - T,
            [x[k], hw0, depth0, base0],
            bounds=([x[0], 1e-3 * step, 0.0, -np.inf], [x[-1], span, np.inf, np.inf]),
            method="trf",
            x_scale="jac",
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=20000,
        )
    except ValueError as exc:
        raise QFitError(str(exc)) from None
    if res.status <= 0 or not np.all(np.isfinite(res.x)):
        raise QFitError(f"Lorentzian fit did not converge: {res.message}")
    c, hw, depth, base = res.x
    Q = c / (2.0 * hw)
    resolved = 2.0 * hw >= step
    if not resolved:
        Q = max(Q, c / step)
    return QFit(float(Q), float(c * scale), float(hw * scale), float(depth), float(base), bool(resolved))
