"""Grayscale PGM (P5) rendering of maps with a sidecar describing the value scale."""
from __future__ import annotations

import numpy as np

from .formats import atomic_write, fmt
from .grids import ResponseMap


def value_range(values, diverging: bool):
    v = np.asarray(values, dtype=float)
    if diverging:
        a = float(np.max(np.abs(v))) if v.size else 0.0
        return -a, a
    return float(np.min(v)), float(np.max(v))


def to_pixels(values, v_min: float, v_max: float) -> np.ndarray:
    """floor(255 (v - v_min)/(v_max - v_min) + 1/2), clipped to 0..255.

    A degenerate range maps to 128 when it straddles zero, else to 0.
    """
    v = np.asarray(values, dtype=float)
    if v_max > v_min:
        x = np.floor(255.0 * (v - v_min) / (v_max - v_min) + 0.5)
    else:
        x = np.full(v.shape, 128.0 if v_min == 0.0 else 0.0)
    return np.clip(x, 0, 255).astype(np.uint8)


def pgm_bytes(pixels: np.ndarray) -> bytes:
    h, w = pixels.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def render_map(rmap: ResponseMap, path, diverging: bool | None = None):
    """Write ``path`` (PGM, rows = B ascending from the top, columns = f ascending)
    and ``path + '.txt'`` recording the mapping. Returns (pixels, v_min, v_max).
    """
    if diverging is None:
        diverging = rmap.quantity == "photoresponse"
    v_min, v_max = value_range(rmap.values, diverging)
    pix = to_pixels(rmap.values, v_min, v_max)
    atomic_write(path, pgm_bytes(pix), binary=True)
    side = [
        "format=pgm-p5\n",
        f"quantity={rmap.quantity}\n",
        f"units={rmap.units}\n",
        f"v_min={fmt(v_min)}\n",
        f"v_max={fmt(v_max)}\n",
        f"diverging={'true' if diverging else 'false'}\n",
        "pixel=floor(255*(v-v_min)/(v_max-v_min)+0.5)\n",
        f"width={rmap.f_axis.count} (f axis, ascending left to right)\n",
        f"height={rmap.b_axis.count} (B axis, ascending top to bottom)\n",
    ]
    atomic_write(f"{path}.txt", "".join(side))
    return pix, v_min, v_max
