"""Independent high-precision evaluation of the reference numbers frozen in tests/.

Uses mpmath only (no package imports) so the values stay independent of the
code paths they check. Run: python scripts/derive_reference_values.py
"""
import mpmath as mp

mp.mp.dps = 40

E = mp.mpf("1.602176634e-19")
H = mp.mpf("6.62607015e-34")
HBAR = H / (2 * mp.pi)
KB = mp.mpf("1.380649e-23")
ME = mp.mpf("9.1093837015e-31")

MSTAR = mp.mpf("0.067") * ME
NS = mp.mpf("3.3e15")
MU = mp.mpf("310")


def fc(B, mstar=MSTAR):
    return E * B / (2 * mp.pi * mstar)


def main():
    out = {}
    out["tau_tr_s"] = MU * MSTAR / E
    out["f_c(0.5T)_Hz"] = fc(mp.mpf("0.5"))
    out["nu(1T)"] = H * NS / (2 * E)
    out["l0(1T)_m"] = mp.sqrt(HBAR / E)
    out["dscale(1T)_m"] = mp.sqrt(HBAR / E) * mp.sqrt(out["nu(1T)"])
    out["f_mp(0.5T,fp=60GHz)_Hz"] = mp.sqrt(fc(mp.mpf("0.5")) ** 2 + mp.mpf("60e9") ** 2)
    out["rho0_ohm"] = 1 / (NS * E * MU)
    out["sdh_period_invT"] = 2 * E / (H * NS)
    out["sdh_freq_T"] = H * NS / (2 * E)

    # 2x2 coupled mode at resonance, via characteristic polynomial roots
    f0 = mp.mpf("205e9")
    om = mp.mpf("0.2") * f0
    # det([[f0 - x, om], [om, f0 - x]]) = x^2 - 2 f0 x + f0^2 - om^2
    roots = sorted(mp.polyroots([1, -2 * f0, f0 ** 2 - om ** 2]))
    out["coupled_LP_Hz"], out["coupled_UP_Hz"] = roots

    # Hopfield quartic at resonance, generic polynomial root finder
    c = [1, 0, -(2 * f0 ** 2 + 4 * om ** 2), 0, f0 ** 4]
    r = sorted(x.real for x in mp.polyroots(c, maxsteps=200, extraprec=200) if x.real > 0)
    out["hopfield_LP_Hz"], out["hopfield_UP_Hz"] = r

    # n=2 decay locus, CoupledMode, f_cav=205 GHz, eta=0.2, f_p=0
    def g_up(B):
        x = fc(B)
        return ((f0 + x + mp.sqrt((f0 - x) ** 2 + 4 * om ** 2)) / 2 - 2 * x) / 1e9

    def g_lp(B):
        x = fc(B)
        return (f0 + x - mp.sqrt((f0 - x) ** 2 + 4 * om ** 2)) / 2 - 2 * x

    out["locus_n2_UP_B_T"] = mp.findroot(g_up, (mp.mpf("0.1"), mp.mpf("0.5")), solver="anderson")
    # brute-force sign scan of the LP residual on (0, 1] T
    n = 100000
    lp_changes = 0
    prev = g_lp(mp.mpf(1) / n)
    for i in range(2, n + 1, 97):
        cur = g_lp(mp.mpf(i) / n)
        lp_changes += (prev > 0) != (cur > 0)
        prev = cur
    out["locus_n2_LP_sign_changes"] = lp_changes

    # steady-state polariton number: P * Q / (hbar * w^2)
    w = 2 * mp.pi * f0
    out["N_pol(1uW,205GHz,Q=5)"] = mp.mpf("1e-6") * 5 / (HBAR * w ** 2)

    # single-Lorentzian weight inside +-hbar*wc/2 for FWHM gamma = hbar*wc/k
    for k in (20, 64):
        out[f"lorentz_window_fraction(k={k})"] = 2 / mp.pi * mp.atan(k)

    for key, val in out.items():
        print(f"{key:40s} {mp.nstr(val, 17)}")


if __name__ == "__main__":
    main()
