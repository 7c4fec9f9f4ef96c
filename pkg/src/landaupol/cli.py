"""Command-line driver.

Every subcommand writes its output files and prints a one-line JSON summary on
stdout. Exit codes: 0 ok, 2 bad usage, 3 invalid input, 4 fit did not converge.
Physical parameters come only from --config; flags set grids, model, seed, paths.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import formats
from .constants import GHZ
from .fitting import (
    DEFAULT_BOUNDS,
    PARAM_NAMES,
    FitError,
    QFitError,
    Theta,
    extract_peaks,
    fit_dispersion,
    fit_quality_factor,
)
from .grids import Grid1D, GridError
from .params import ConfigError, ParameterError, config_to_dict, default_config, load_config
from .photoresponse import FillingSliceError, decay_loci, photoresponse_map, slice_by_filling
from .polariton import transmission_map
from .render import render_map
from .transport import drude_rho0, rho_xx_dark

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FIT = 0, 2, 3, 4

DEFAULT_F_RANGE = "60:600:541"  # GHz, the tunable source range


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class FitNotConverged(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON parameter file (defaults: CH205 sample)")
    p.add_argument("--out", help="output path")
    p.add_argument("--b-range", help="start:stop:count in tesla")
    p.add_argument("--f-range", help="start:stop:count in GHz")
    p.add_argument("--model", choices=("coupled", "hopfield"), default="hopfield")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--render", action="store_true", help="also write a PGM next to the CSV")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="landaupol", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("simulate-transmission", parents=[common], help="synthetic THz transmission map")
    sub.add_parser("simulate-transport", parents=[common], help="dark rho_xx(B) trace")
    sub.add_parser("simulate-photoresponse", parents=[common], help="photo-response map")

    p = sub.add_parser("decay-loci", parents=[common], help="branch / harmonic crossings")
    p.add_argument("--n-range", default="2:4", help="harmonic range lo:hi (lo >= 2)")

    p = sub.add_parser("extract-peaks", parents=[common], help="dip positions from a transmission map")
    p.add_argument("--map", required=True)
    p.add_argument("--threshold", type=float, default=0.1)
    p.add_argument("--min-prominence", type=float, default=0.02)

    p = sub.add_parser("fit-dispersion", parents=[common], help="fit branch model to a peak list")
    p.add_argument("--peaks", required=True)
    p.add_argument("--fix", action="append", default=[], choices=PARAM_NAMES)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--bootstrap", type=int, default=200)

    p = sub.add_parser("fit-q", parents=[common], help="quality factor from one B row of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--b", type=float, required=True, help="field [T]; nearest row is used")
    p.add_argument("--f-window", help="lo:hi in GHz")

    p = sub.add_parser("slice-filling", parents=[common], help="integer / half-integer filling slice")
    p.add_argument("--map", required=True)
    p.add_argument("--which", choices=("integer", "half-integer"), required=True)
    p.add_argument("--tol", type=float, default=0.1)
    return ap


def _grid(text, default, scale=1.0):
    try:
        return Grid1D.parse(text or default, scale)
    except GridError as exc:
        raise UsageError(str(exc)) from None


def _config(args):
    return load_config(args.config) if args.config else default_config()


def _read(path, parse):
    try:
        return parse(formats.read_text(path))
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except formats.FormatError as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _write_map(rmap, args, default_out, cfg):
    out = args.out or default_out
    meta = {"model": args.model, "config": json.dumps(config_to_dict(cfg), sort_keys=True)}
    formats.atomic_write(out, formats.serialize_map(rmap, meta))
    summary = {"out": out, "shape": list(rmap.values.shape)}
    if args.render:
        pgm = out.rsplit(".", 1)[0] + ".pgm"
        _, lo, hi = render_map(rmap, pgm)
        summary.update(pgm=pgm, v_min=lo, v_max=hi)
    return summary


def cmd_simulate_transmission(args):
    cfg = _config(args)
    rmap = transmission_map(
        _grid(args.b_range, "0:1.2:241"), _grid(args.f_range, DEFAULT_F_RANGE, GHZ), args.model, cfg.resonator, cfg.material
    )
    s = _write_map(rmap, args, "transmission.csv", cfg)
    s["min_T"] = float(rmap.values.min())
    return s


def cmd_simulate_transport(args):
    cfg = _config(args)
    b_axis = _grid(args.b_range, "0.05:1.2:2000")
    tr = rho_xx_dark(b_axis, cfg.resonator, cfg.material)
    meta = {"eta": formats.fmt(tr.eta_used), "config": json.dumps(config_to_dict(cfg), sort_keys=True)}
    out = args.out or "trace.csv"
    formats.atomic_write(out, formats.serialize_trace(formats.TraceData(tr.B, tr.rho_xx, meta)))
    return {
        "out": out,
        "n": int(b_axis.count),
        "eta": tr.eta_used,
        "rho0_ohm": drude_rho0(cfg.material),
        "rho_max_ohm": float(tr.rho_xx.max()),
    }


def cmd_simulate_photoresponse(args):
    cfg = _config(args)
    rmap = photoresponse_map(
        _grid(args.b_range, "0.1:1.2:1101"),
        _grid(args.f_range, DEFAULT_F_RANGE, GHZ),
        args.model,
        cfg.resonator,
        cfg.material,
        cfg.response,
    )
    s = _write_map(rmap, args, "photoresponse.csv", cfg)
    s.update(min_ohm=float(rmap.values.min()), max_ohm=float(rmap.values.max()))
    return s


def cmd_decay_loci(args):
    cfg = _config(args)
    b_axis = _grid(args.b_range, "0.02:1.5:20001")
    try:
        lo, hi = (int(x) for x in args.n_range.split(":"))
    except ValueError:
        raise UsageError(f"bad --n-range {args.n_range!r}") from None
    loci = decay_loci(args.model, cfg.resonator, cfg.material, (lo, hi), (b_axis.start, b_axis.stop), b_axis.count)
    out = args.out or "loci.csv"
    formats.atomic_write(out, formats.serialize_loci(loci, {"model": args.model}))
    return {
        "out": out,
        "count": len(loci),
        "loci": [[d.n, d.branch, d.B_star, d.f_star / GHZ] for d in loci],
    }


def cmd_extract_peaks(args):
    rmap = _read(args.map, formats.parse_map)
    peaks = extract_peaks(rmap, args.threshold, args.min_prominence)
    out = args.out or "peaks.csv"
    formats.atomic_write(out, formats.serialize_peaks(peaks))
    return {"out": out, "n_peaks": len(peaks)}


def cmd_fit_dispersion(args):
    cfg = _config(args)
    peaks = _read(args.peaks, formats.parse_peaks)
    res = fit_dispersion(
        peaks,
        args.model,
        Theta.from_params(cfg.resonator, cfg.material),
        DEFAULT_BOUNDS,
        fixed=tuple(args.fix),
        n_starts=args.starts,
        n_bootstrap=args.bootstrap,
        seed=args.seed,
        r=cfg.resonator,
        m=cfg.material,
    )
    t, u = res.theta, res.uncertainty
    summary = {
        "model": res.kind,
        "eta": t.eta,
        "eta_uncertainty": u.eta,
        "f_cav_GHz": t.f_cav / GHZ,
        "f_cav_uncertainty_GHz": u.f_cav / GHZ,
        "m_star_ratio": t.m_star_ratio,
        "m_star_ratio_uncertainty": u.m_star_ratio,
        "f_p_GHz": t.f_p / GHZ,
        "f_p_uncertainty_GHz": u.f_p / GHZ,
        "rss_Hz2": res.rss,
        "n_points": res.n_points,
        "converged": res.converged,
        "n_restarts": res.n_restarts_used,
        "uncertainty_kind": "bootstrap 95% half-width",
    }
    out = args.out or "fit.json"
    formats.atomic_write(out, json.dumps(summary, sort_keys=True, indent=2) + "\n")
    summary["out"] = out
    if not res.converged:
        raise FitNotConverged(summary)
    return summary


def cmd_fit_q(args):
    rmap = _read(args.map, formats.parse_map)
    B = rmap.b_axis.values()
    i = int(np.argmin(np.abs(B - args.b)))
    f = rmap.f_axis.values()
    T = rmap.values[i]
    if args.f_window:
        try:
            lo, hi = (float(x) * GHZ for x in args.f_window.split(":"))
        except ValueError:
            raise UsageError(f"bad --f-window {args.f_window!r}") from None
        sel = (f >= lo) & (f <= hi)
        f, T = f[sel], T[sel]
    q = fit_quality_factor(f, T)
    summary = {"B_T": float(B[i]), "Q": q.Q, "f0_GHz": q.f0 / GHZ, "half_width_GHz": q.half_width / GHZ, "resolved": q.resolved}
    out = args.out or "q.json"
    formats.atomic_write(out, json.dumps(summary, sort_keys=True, indent=2) + "\n")
    summary["out"] = out
    return summary


def cmd_slice_filling(args):
    cfg = _config(args)
    rmap = _read(args.map, formats.parse_map)
    which = args.which.replace("-", "_")
    sliced = slice_by_filling(rmap, cfg.material, which, args.tol)
    s = _write_map(sliced, args, f"slice_{which}.csv", cfg)
    s["which"] = args.which
    return s


COMMANDS = {
    "simulate-transmission": cmd_simulate_transmission,
    "simulate-transport": cmd_simulate_transport,
    "simulate-photoresponse": cmd_simulate_photoresponse,
    "decay-loci": cmd_decay_loci,
    "extract-peaks": cmd_extract_peaks,
    "fit-dispersion": cmd_fit_dispersion,
    "fit-q": cmd_fit_q,
    "slice-filling": cmd_slice_filling,
}


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def _emit(command, summary, stream):
    stream.write(json.dumps(_clean({"command": command, **summary}), sort_keys=True) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        summary = COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(f"landaupol: usage error: {exc}\n")
        return EXIT_USAGE
    except FitNotConverged as exc:
        _emit(args.command, exc.args[0], stdout)
        stderr.write("landaupol: fit did not converge\n")
        return EXIT_FIT
    except QFitError as exc:
        stderr.write(f"landaupol: fit did not converge: {exc}\n")
        return EXIT_FIT
    except (InputError, ConfigError, ParameterError, GridError, FitError, FillingSliceError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        stderr.write(f"landaupol: invalid input: {msg}\n")
        return EXIT_INPUT
    _emit(args.command, summary, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
