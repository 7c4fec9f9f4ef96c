"""Versioned CSV formats for traces, maps, peak lists and decay loci.

Every file starts with ``# <kind>-v1`` followed by ``# key=value`` metadata
lines. Floats are written with 17 significant digits, so parse(serialize(x))
reproduces every value bit-for-bit.
"""
from __future__ import annotations

import io
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .grids import Grid1D, GridError, ResponseMap
from .photoresponse import DecayLocus


class FormatError(ValueError):
    """Base class for file-format problems; ``line`` is 1-based when known."""

    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


class VersionError(FormatError):
    pass


class MalformedRowError(FormatError):
    pass


class CountMismatchError(FormatError):
    def __init__(self, expected, actual, line=None):
        self.expected, self.actual = expected, actual
        super().__init__(f"expected {expected} data rows, found {actual}", line)


class AxisOrderError(FormatError):
    pass


def fmt(x) -> str:
    return f"{float(x):.17g}"


def atomic_write(path, data, binary=False):
    """Write via a temp file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb" if binary else "w", **({} if binary else {"newline": "\n"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_header(lines, kind):
    if not lines or lines[0].strip() != f"# {kind}-v1":
        got = lines[0].strip() if lines else "<empty file>"
        raise VersionError(f"expected '# {kind}-v1' header, got {got!r}", 1)
    meta = {}
    i = 1
    while i < len(lines) and lines[i].startswith("#"):
        body = lines[i][1:].strip()
        if "=" not in body:
            raise FormatError(f"metadata line must be '# key=value', got {lines[i].strip()!r}", i + 1)
        k, v = body.split("=", 1)
        meta[k.strip()] = v.strip()
        i += 1
    return meta, i


def _meta_lines(meta):
    out = []
    for k, v in meta.items():
        v = str(v)
        if "\n" in v or "=" in k or "\n" in k:
            raise ValueError(f"metadata {k!r} cannot be serialized")
        out.append(f"# {k}={v}\n")
    return out


def _rows(lines, start, header, ncols):
    """Yield (lineno, fields) for data rows after an optional column header."""
    i = start
    if i < len(lines) and lines[i].strip() == header:
        i += 1
    for j in range(i, len(lines)):
        text = lines[j].strip()
        if not text:
            continue
        parts = text.split(",")
        if len(parts) != ncols:
            raise MalformedRowError(f"expected {ncols} fields, got {len(parts)}", j + 1)
        yield j + 1, parts


# --- traces ------------------------------------------------------------------

TRACE_HEADER = "B_tesla,rho_ohm"


@dataclass(eq=False)
class TraceData:
    B: np.ndarray
    rho: np.ndarray
    meta: dict = field(default_factory=dict)


def serialize_trace(tr: TraceData) -> str:
    B = np.asarray(tr.B, dtype=float)
    rho = np.asarray(tr.rho, dtype=float)
    if B.shape != rho.shape or B.ndim != 1:
        raise ValueError("B and rho must be 1D arrays of equal length")
    if np.any(np.diff(B) <= 0):
        raise AxisOrderError("B must be strictly increasing")
    out = ["# trace-v1\n", *_meta_lines(tr.meta), TRACE_HEADER + "\n"]
    out.extend(f"{fmt(b)},{fmt(r)}\n" for b, r in zip(B, rho))
    return "".join(out)


def parse_trace(text: str) -> TraceData:
    lines = text.splitlines()
    meta, i = _read_header(lines, "trace")
    B, rho = [], []
    for lineno, (b, r) in _rows(lines, i, TRACE_HEADER, 2):
        try:
            bv, rv = float(b), float(r)
        except ValueError:
            raise MalformedRowError(f"non-numeric value in {b!r},{r!r}", lineno) from None
        if B and not bv > B[-1]:
            raise AxisOrderError(f"B not strictly increasing ({bv!r} after {B[-1]!r})", lineno)
        B.append(bv)
        rho.append(rv)
    return TraceData(np.array(B, dtype=float), np.array(rho, dtype=float), meta)


# --- maps ----------------------------------------------------------------------

MAP_HEADER = "iB,if,value"


def _axis_text(ax: Grid1D) -> str:
    return f"{fmt(ax.start)},{fmt(ax.stop)},{ax.count}"


def _parse_axis(meta, key):
    if key not in meta:
        raise FormatError(f"missing '# {key}=start,stop,count' line")
    parts = meta[key].split(",")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if len(parts) != 3:
            raise ValueError
    except (ValueError, IndexError):
        raise FormatError(f"bad {key} value {meta[key]!r}") from None
    try:
        return Grid1D(start, stop, count)
    except GridError as exc:
        raise AxisOrderError(f"{key}: {exc}") from None


def serialize_map(rmap: ResponseMap, extra_meta: dict | None = None) -> str:
    nB, nf = rmap.values.shape
    meta = {
        "b_axis": _axis_text(rmap.b_axis),
        "f_axis": _axis_text(rmap.f_axis),
        "quantity": rmap.quantity,
        "units": rmap.units,
        **(extra_meta or {}),
    }
    out = ["# map-v1\n", *_meta_lines(meta), MAP_HEADER + "\n"]
    flat = rmap.values.ravel()
    ib = np.repeat(np.arange(nB), nf)
    jf = np.tile(np.arange(nf), nB)
    out.extend(f"{a},{b},{fmt(v)}\n" for a, b, v in zip(ib, jf, flat))
    return "".join(out)


def parse_map(text: str) -> ResponseMap:
    lines = text.splitlines()
    meta, i = _read_header(lines, "map")
    b_axis = _parse_axis(meta, "b_axis")
    f_axis = _parse_axis(meta, "f_axis")
    if "quantity" not in meta:
        raise FormatError("missing '# quantity=' line")
    nB, nf = b_axis.count, f_axis.count
    expected = nB * nf
    vals = np.empty(expected)
    k = 0
    last_line = None
    for lineno, (a, b, v) in _rows(lines, i, MAP_HEADER, 3):
        last_line = lineno
        if k >= expected:
            k += 1
            continue
        try:
            ia, jb, val = int(a), int(b), float(v)
        except ValueError:
            raise MalformedRowError(f"bad row {a},{b},{v}", lineno) from None
        if not (0 <= ia < nB and 0 <= jb < nf):
            raise MalformedRowError(f"index ({ia},{jb}) outside {nB}x{nf} grid", lineno)
        if (ia, jb) != divmod(k, nf):
            raise MalformedRowError(f"row ({ia},{jb}) out of row-major order", lineno)
        vals[k] = val
        k += 1
    if k != expected:
        raise CountMismatchError(expected, k, last_line)
    return ResponseMap(
        b_axis,
        f_axis,
        vals.reshape(nB, nf),
        quantity=meta["quantity"],
        units=meta.get("units", "1"),
    )


# --- peak lists ----------------------------------------------------------------

PEAK_HEADER = "B_tesla,f_hz,weight"


def serialize_peaks(peaks) -> str:
    out = ["# peaks-v1\n", *_meta_lines({"source": peaks.source}), PEAK_HEADER + "\n"]
    out.extend(f"{fmt(b)},{fmt(f)},{fmt(w)}\n" for b, f, w in zip(peaks.B, peaks.f, peaks.weight))
    return "".join(out)


def parse_peaks(text: str):
    from .fitting import FitError, PeakList

    lines = text.splitlines()
    meta, i = _read_header(lines, "peaks")
    rows = []
    for lineno, parts in _rows(lines, i, PEAK_HEADER, 3):
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise MalformedRowError(f"non-numeric value in {','.join(parts)!r}", lineno) from None
    arr = np.array(rows, dtype=float).reshape(-1, 3)
    try:
        return PeakList(arr[:, 0], arr[:, 1], arr[:, 2], source=meta.get("source", ""))
    except FitError as exc:
        raise FormatError(str(exc)) from None


# --- decay loci ----------------------------------------------------------------

LOCI_HEADER = "n,branch,B_tesla,f_hz"


def serialize_loci(loci, meta: dict | None = None) -> str:
    out = ["# loci-v1\n", *_meta_lines(meta or {}), LOCI_HEADER + "\n"]
    out.extend(f"{d.n},{d.branch},{fmt(d.B_star)},{fmt(d.f_star)}\n" for d in loci)
    return "".join(out)


def parse_loci(text: str):
    lines = text.splitlines()
    _, i = _read_header(lines, "loci")
    out = []
    for lineno, (n, br, b, f) in _rows(lines, i, LOCI_HEADER, 4):
        if br not in ("LP", "UP"):
            raise MalformedRowError(f"branch must be LP or UP, got {br!r}", lineno)
        try:
            out.append(DecayLocus(int(n), br, float(b), float(f)))
        except ValueError:
            raise MalformedRowError("bad locus row", lineno) from None
    return out


def read_text(path) -> str:
    with io.open(path, "r", newline="") as fh:
        return fh.read()
