"""Transmission maps of the two coupled cavities with fitted branch overlays.

Writes map CSVs, grayscale PGMs and (with matplotlib) a PNG per cavity.
"""
import argparse
from pathlib import Path

from landaupol import formats
from landaupol.constants import GHZ
from landaupol.fitting import extract_peaks, fit_dispersion
from landaupol.grids import Grid1D
from landaupol.params import CH140, CH205, MaterialParams
from landaupol.polariton import branches, transmission_map
from landaupol.render import render_map

from _plot import maybe_plot

def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/dispersion")
    ap.add_argument("--model", default="hopfield", choices=("coupled", "hopfield"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    m = MaterialParams()
    b_axis, f_axis = Grid1D(0.0, 1.2, 241), Grid1D(60e9, 600e9, 541)
    for name, r in (("ch205", CH205), ("ch140", CH140)):
        rmap = transmission_map(b_axis, f_axis, args.model, r, m)
        formats.atomic_write(out / f"{name}.csv", formats.serialize_map(rmap))
        render_map(rmap, out / f"{name}.pgm")
        peaks = extract_peaks(rmap)
        res = fit_dispersion(peaks, args.model, fixed=("m_star_ratio",), n_bootstrap=100, r=r, m=m)
        t, u = res.theta, res.uncertainty
        print(
            f"{name}: eta = {t.eta:.3f} +- {u.eta:.3f} (true {r.eta}), "
            f"f_cav = {t.f_cav / GHZ:.1f} +- {u.f_cav / GHZ:.1f} GHz, "
            f"f_p = {t.f_p / GHZ:.1f} GHz, {res.n_points} peaks"
        )
        B = b_axis.values()
        rf, mf = t.apply(r, m)
        br = branches(B, args.model, rf, mf)

        def draw(plt, rmap=rmap, B=B, br=br, title=name):
            fig, ax = plt.subplots(figsize=(5, 4))
            ext = [f_axis.start / GHZ, f_axis.stop / GHZ, B[0], B[-1]]
            ax.imshow(rmap.values, origin="lower", aspect="auto", extent=ext, cmap="gray")
            for f in (br.f_lp, br.f_up):
                ok = (f >= f_axis.start) & (f <= f_axis.stop)
                ax.plot(f[ok] / GHZ, B[ok], color="m", lw=1)
            ax.set_xlabel("frequency (GHz)")
            ax.set_ylabel("B (T)")
            ax.set_title(f"{title}, fit eta = {t.eta:.2f}")
            return fig

        maybe_plot(draw, out / f"{name}.png")

if __name__ == "__main__":
    main()
