"""Photo-response map, its integer / half-integer filling slices and the
polariton decay loci for the 205 GHz cavity."""
import argparse
from pathlib import Path

import numpy as np

from landaupol import formats
from landaupol.constants import GHZ
from landaupol.grids import Grid1D
from landaupol.params import CH205, MaterialParams
from landaupol.photoresponse import decay_loci, photoresponse_map, slice_by_filling
from landaupol.render import render_map

from _plot import maybe_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/photoresponse")
    ap.add_argument("--model", default="hopfield", choices=("coupled", "hopfield"))
    ap.add_argument("--tol", type=float, default=0.1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    m, r = MaterialParams(), CH205
    rmap = photoresponse_map(Grid1D(0.1, 1.2, 1101), Grid1D(60e9, 600e9, 541), args.model, r, m)
    maps = {"full": rmap}
    for which in ("integer", "half_integer"):
        maps[which] = slice_by_filling(rmap, m, which, args.tol)
    for name, mp in maps.items():
        formats.atomic_write(out / f"{name}.csv", formats.serialize_map(mp))
        render_map(mp, out / f"{name}.pgm")

    a, b = maps["integer"].values.ravel(), maps["half_integer"].values.ravel()
    print(f"range {rmap.values.min():.2f} .. {rmap.values.max():.2f} ohm")
    print(f"corr(integer slice, -half-integer slice) = {np.corrcoef(a, -b)[0, 1]:.3f}")

    loci = decay_loci(args.model, r, m, (2, 4), (0.1, 1.2))
    formats.atomic_write(out / "loci.csv", formats.serialize_loci(loci, {"model": args.model}))
    for d in loci:
        print(f"  n={d.n} {d.branch}: B* = {d.B_star:.4f} T, f* = {d.f_star / GHZ:.1f} GHz")

    def draw(plt):
        fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharey=True)
        B = rmap.b_axis.values()
        ext = [60, 600, B[0], B[-1]]
        lim = np.abs(rmap.values).max()
        for ax, (name, mp) in zip(axes, maps.items()):
            ax.imshow(mp.values, origin="lower", aspect="auto", extent=ext, cmap="RdBu_r", vmin=-lim, vmax=lim)
            ax.set_title(name)
            ax.set_xlabel("frequency (GHz)")
        for d in loci:
            axes[0].plot(d.f_star / GHZ, d.B_star, "o", mfc="none", mec="k")
        axes[0].set_ylabel("B (T)")
        return fig

    maybe_plot(draw, out / "photoresponse.png")


if __name__ == "__main__":
    main()
