"""Dark rho_xx(B) for the reference Hall bar and the two coupled cavities.

Prints the SdH amplitude at a few maxima to show the coupling-ordered
suppression, and writes trace-v1 files.
"""
import argparse
from pathlib import Path

import numpy as np

from landaupol import formats
from landaupol.grids import Grid1D
from landaupol.params import CH140, CH205, RH, MaterialParams
from landaupol.transport import drude_rho0, rho_xx_dark

from _plot import maybe_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/transport")
    ap.add_argument("--b-range", default="0.1:1.2:20000")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    m = MaterialParams()
    axis = Grid1D.parse(args.b_range)
    traces = {}
    for name, r in (("RH", RH), ("CH205", CH205), ("CH140", CH140)):
        tr = rho_xx_dark(axis, r, m)
        traces[name] = tr
        meta = {"eta": formats.fmt(r.eta)}
        formats.atomic_write(out / f"{name}.csv", formats.serialize_trace(formats.TraceData(tr.B, tr.rho_xx, meta)))

    r0 = traces["RH"].rho_xx
    B = traces["RH"].B
    maxima = np.flatnonzero((r0[1:-1] > r0[:-2]) & (r0[1:-1] >= r0[2:])) + 1
    maxima = maxima[B[maxima] >= 0.3]
    print(f"rho0 = {drude_rho0(m):.3f} ohm")
    print("   B (T)    RH     CH205  CH140   (rho_xx at SdH maxima, ohm)")
    for i in maxima[:: max(1, len(maxima) // 8)]:
        row = "  ".join(f"{traces[k].rho_xx[i]:6.3f}" for k in ("RH", "CH205", "CH140"))
        print(f"  {B[i]:6.3f}  {row}")

    def draw(plt):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        for k, tr in traces.items():
            ax.plot(tr.B, tr.rho_xx, lw=0.8, label=f"{k} (eta = {tr.eta_used})")
        ax.set_xlabel("B (T)")
        ax.set_ylabel("rho_xx (ohm)")
        ax.legend()
        return fig

    maybe_plot(draw, out / "rho_xx.png")


if __name__ == "__main__":
    main()
