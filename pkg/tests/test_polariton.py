import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from landaupol.constants import GHZ, M_E
from landaupol.grids import Grid1D
from landaupol.landau import cyclotron_frequency
from landaupol.params import MaterialParams, ResonatorParams
from landaupol.polariton import (
    PolaritonModelKind,
    anticrossing_field,
    branch_frequencies,
    branches,
    branches_coupled_mode,
    branches_hopfield,
    dispersion_sweep,
    magneto_plasmon_frequency,
    photon_weight,
    transmission_map,
)

M = MaterialParams()
R = ResonatorParams(f_cav=205e9, eta=0.2, f_p=60e9)
R0 = ResonatorParams(f_cav=205e9, eta=0.2, f_p=0.0)
KINDS = ["coupled", "hopfield"]


def _resonant_field(r, m=M):
    return anticrossing_field(r, m)


def test_magneto_plasmon_reference():
    # mpmath oracle
    assert magneto_plasmon_frequency(0.5, R, M) == pytest.approx(217345040505.80965, rel=1e-12)
    assert magneto_plasmon_frequency(0.0, R, M) == R.f_p
    assert magneto_plasmon_frequency(0.7, R0, M) == cyclotron_frequency(0.7, M)


def test_coupled_mode_resonance_reference():
    br = branches_coupled_mode(_resonant_field(R0), R0, M)
    assert br.f_lp == pytest.approx(164e9, rel=1e-12)
    assert br.f_up == pytest.approx(246e9, rel=1e-12)
    assert br.w_phot_lp == pytest.approx(0.5, abs=1e-12)
    assert br.w_mat_up == pytest.approx(0.5, abs=1e-12)


def test_coupled_mode_matches_eigensolve():
    B = np.linspace(0.05, 1.5, 50)
    br = branches_coupled_mode(B, R, M)
    for i, b in enumerate(B):
        om = R.coupling
        ev = np.linalg.eigvalsh(np.array([[R.f_cav, om], [om, br.f_mp[i]]]))
        assert br.f_lp[i] == pytest.approx(ev[0], rel=1e-12)
        assert br.f_up[i] == pytest.approx(ev[1], rel=1e-12)
        # eigenvector weights
        w, v = np.linalg.eigh(np.array([[R.f_cav, om], [om, br.f_mp[i]]]))
        assert br.w_phot_lp[i] == pytest.approx(v[0, 0] ** 2, abs=1e-12)
        assert br.w_phot_up[i] == pytest.approx(v[0, 1] ** 2, abs=1e-12)


def test_hopfield_resonance_reference():
    # polynomial root finder oracle, scripts/derive_reference_values.py
    br = branches_hopfield(_resonant_field(R0), R0, M)
    assert br.f_lp == pytest.approx(168059800057.30418, rel=1e-11)
    assert br.f_up == pytest.approx(250059800057.30418, rel=1e-11)
    f0, om = 205e9, 41e9
    roots = np.sort(np.sqrt(np.roots([1, -(2 * f0**2 + 4 * om**2), f0**4])))
    np.testing.assert_allclose([br.f_lp, br.f_up], roots, rtol=1e-11)


@pytest.mark.parametrize("kind", KINDS)
def test_decoupled_limit(kind):
    r = ResonatorParams(eta=0.0, f_p=60e9)
    B = np.linspace(0.0, 1.5, 301)
    br = branches(B, kind, r, M)
    f_mp = magneto_plasmon_frequency(B, r, M)
    np.testing.assert_allclose(br.f_lp, np.minimum(r.f_cav, f_mp), rtol=1e-14)
    np.testing.assert_allclose(br.f_up, np.maximum(r.f_cav, f_mp), rtol=1e-14)
    assert set(np.unique(br.w_phot_lp)) <= {0.0, 1.0}
    assert set(np.unique(br.w_phot_up)) <= {0.0, 1.0}
    assert np.all(br.w_phot_lp + br.w_phot_up == 1.0)


def test_hopfield_zero_field_gap():
    br = branches_hopfield(0.0, R0, M)
    assert br.f_lp == 0.0
    assert br.f_up == pytest.approx(math.sqrt(R0.f_cav**2 + 4 * R0.coupling**2), rel=1e-15)
    assert br.f_up > R0.f_cav


@settings(max_examples=300)
@given(
    st.floats(50e9, 700e9),
    st.floats(0.0, 1.0),
    st.floats(0.0, 900e9),
)
def test_hopfield_vieta(f_cav, eta, f_mp):
    om = eta * f_cav
    lp, up = branch_frequencies("hopfield", f_cav, f_mp, om)
    assert lp * up == pytest.approx(f_cav * f_mp, rel=1e-12, abs=1e-300)
    assert lp**2 + up**2 == pytest.approx(f_cav**2 + f_mp**2 + 4 * om**2, rel=1e-12)
    assert 0 <= lp <= up


@settings(max_examples=300)
@given(st.floats(0.0, 1.5), st.floats(0.0, 0.6), st.floats(0.0, 150e9), st.sampled_from(KINDS))
def test_weights_normalized_and_bounded(B, eta, f_p, kind):
    br = branches(B, kind, ResonatorParams(eta=eta, f_p=f_p), M)
    assert br.w_phot_lp + br.w_mat_lp == pytest.approx(1.0, abs=1e-12)
    assert br.w_phot_up + br.w_mat_up == pytest.approx(1.0, abs=1e-12)
    for w in (br.w_phot_lp, br.w_phot_up, br.w_mat_lp, br.w_mat_up):
        assert 0.0 <= w <= 1.0


@settings(max_examples=300)
@given(st.floats(0.01, 1.5), st.floats(0.0, 0.6), st.floats(0.0, 150e9))
def test_coupled_mode_brackets_bare_modes(B, eta, f_p):
    r = ResonatorParams(eta=eta, f_p=f_p)
    br = branches_coupled_mode(B, r, M)
    lo, hi = sorted((r.f_cav, br.f_mp))
    assert br.f_lp <= lo * (1 + 1e-15)
    assert br.f_up >= hi * (1 - 1e-15)
    if r.coupling**2 < r.f_cav * br.f_mp:
        assert 0 < br.f_lp < br.f_up


def test_coupled_mode_lower_branch_can_go_negative():
    # rotating-wave model: Omega^2 > f_cav f_mp near B = 0
    br = branches_coupled_mode(0.01, ResonatorParams(eta=0.5, f_p=0.0), M)
    assert br.f_lp < 0


def test_randomized_sweep_has_no_nan():
    rng = np.random.default_rng(7)
    n = 10_000
    f_cav = rng.uniform(50e9, 700e9, n)
    om = rng.uniform(0, 1, n) * f_cav
    f_mp = rng.uniform(0, 900e9, n)
    for kind in KINDS:
        lp, up = branch_frequencies(kind, f_cav, f_mp, om)
        assert np.all(np.isfinite(lp)) and np.all(np.isfinite(up))
        # even in the coupling sign
        lp2, up2 = branch_frequencies(kind, f_cav, f_mp, -om)
        assert np.array_equal(lp, lp2) and np.array_equal(up, up2)
        w = photon_weight(lp, f_cav, om)
        assert np.all((w >= 0) & (w <= 1))


def test_anticrossing_gap_is_two_omega():
    for eta in (0.2, 0.3):
        r = ResonatorParams(eta=eta, f_p=60e9)
        br = branches_coupled_mode(anticrossing_field(r, M), r, M)
        assert br.f_up - br.f_lp == pytest.approx(2 * eta * r.f_cav, rel=1e-9)


def test_anticrossing_field_none_when_plasmon_above_cavity():
    assert math.isnan(anticrossing_field(ResonatorParams(f_p=300e9), M))


def test_sweep_minimum_gap_within_one_step():
    axis = Grid1D(0.05, 1.5, 2901)
    br = dispersion_sweep(axis, PolaritonModelKind.COUPLED_MODE, R, M)
    i = int(np.argmin(br.f_up - br.f_lp))
    assert abs(br.B[i] - anticrossing_field(R, M)) <= axis.step
    assert (br.f_up - br.f_lp)[i] == pytest.approx(2 * R.coupling, rel=1e-6)


@pytest.mark.parametrize("kind", KINDS)
def test_sweep_is_continuous(kind):
    axis = Grid1D(0.0, 1.5, 1501)
    br = dispersion_sweep(axis, kind, R, M)
    dense = dispersion_sweep(Grid1D(0.0, 1.5, 150001), kind, R, M)
    for name in ("f_lp", "f_up"):
        max_slope = np.max(np.abs(np.diff(getattr(dense, name)))) / (1.5 / 150000)
        assert np.all(np.abs(np.diff(getattr(br, name))) < 5 * max_slope * axis.step)


@pytest.mark.parametrize("kind", KINDS)
def test_lower_branch_monotone_without_plasmon(kind):
    br = dispersion_sweep(Grid1D(0.0, 1.5, 20001), kind, R0, M)
    assert np.all(np.diff(br.f_lp) >= 0)


def test_sweep_matches_pointwise():
    axis = Grid1D(0.1, 1.0, 7)
    br = dispersion_sweep(axis, "hopfield", R, M)
    assert len(br) == 7
    p = br.point(3)
    q = branches_hopfield(axis.sample(3), R, M)
    assert p.f_lp == pytest.approx(q.f_lp, rel=1e-15)


def test_coupling_hook_constant_matches_default():
    B = np.linspace(0.1, 1.2, 20)
    a = branches(B, "hopfield", R, M)
    b = branches(B, "hopfield", R, M, coupling=lambda b: np.full_like(b, R.coupling))
    assert np.array_equal(a.f_up, b.f_up)
    c = branches(B, "hopfield", R, M, coupling=lambda b: 30e9 * np.sqrt(b))
    assert not np.array_equal(a.f_up, c.f_up)


def test_transmission_bounded_and_decoupled_dip():
    r = ResonatorParams(eta=0.0, f_p=0.0)
    f_axis = Grid1D(60e9, 600e9, 541)
    rmap = transmission_map(Grid1D(0.05, 1.2, 24), f_axis, "coupled", r, M)
    assert rmap.values.min() >= 0 and rmap.values.max() <= 1
    j = int(round((205e9 - 60e9) / f_axis.step))
    # far from the crossing only the cavity dip remains, depth 0.8
    assert rmap.values[0, j] == pytest.approx(0.2, abs=1e-6)


def test_transmission_two_dips_at_anticrossing():
    B_x = anticrossing_field(R, M)
    f_axis = Grid1D(100e9, 320e9, 2201)
    rmap = transmission_map(Grid1D(B_x, B_x + 0.1, 2), f_axis, "coupled", R, M)
    f = f_axis.values()
    row = rmap.values[0]
    mins = [i for i in range(1, len(f) - 1) if row[i] < row[i - 1] and row[i] <= row[i + 1]]
    assert len(mins) == 2
    # overlapping Lorentzian tails pull the two minima inward by a fraction of a percent
    assert (f[mins[1]] - f[mins[0]]) == pytest.approx(2 * R.coupling, rel=1e-2)


@pytest.mark.parametrize("kind", KINDS)
def test_transmission_independent_of_density(kind):
    axes = (Grid1D(0.0, 1.2, 121), Grid1D(60e9, 600e9, 271))
    a = transmission_map(*axes, kind, R, MaterialParams(n_s=3.3e15))
    b = transmission_map(*axes, kind, R, MaterialParams(n_s=3.63e15))
    assert a.values.tobytes() == b.values.tobytes()


def test_transmission_metadata():
    rmap = transmission_map(Grid1D(0.0, 1.0, 3), Grid1D(60 * GHZ, 70 * GHZ, 3), "hopfield", R, MaterialParams(m_star=0.07 * M_E))
    assert rmap.quantity == "transmission"
    assert rmap.values.shape == (3, 3)
