"""Uniform 1D axes and (B x f) value grids."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid1D:
    """Uniform axis: sample_i = start + i*(stop - start)/(count - 1)."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise GridError(f"grid count must be an integer >= 2, got {self.count!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise GridError(f"grid needs start < stop, got {self.start!r}, {self.stop!r}")
        object.__setattr__(self, "count", int(self.count))

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)

    def sample(self, i):
        return self.start + i * self.step

    def values(self) -> np.ndarray:
        return self.start + np.arange(self.count) * self.step

    @classmethod
    def parse(cls, text: str, scale: float = 1.0) -> "Grid1D":
        """Parse 'start:stop:count' (start/stop multiplied by scale)."""
        parts = text.split(":")
        if len(parts) != 3:
            raise GridError(f"expected start:stop:count, got {text!r}")
        try:
            return cls(float(parts[0]) * scale, float(parts[1]) * scale, int(parts[2]))
        except ValueError as exc:
            raise GridError(f"bad range {text!r}: {exc}") from None


@dataclass(eq=False)
class Grid2D:
    """B-axis x f-axis grid; ``values[iB, if]`` is the row-major buffer."""

    b_axis: Grid1D
    f_axis: Grid1D
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        shape = (self.b_axis.count, self.f_axis.count)
        if self.values is None:
            self.values = np.zeros(shape)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != shape:
            raise GridError(f"buffer shape {self.values.shape} != {shape}")

    @property
    def shape(self):
        return self.values.shape

    def mesh(self):
        """(B, f) broadcastable column/row arrays."""
        return self.b_axis.values()[:, None], self.f_axis.values()[None, :]


@dataclass(eq=False)
class ResponseMap(Grid2D):
    """A Grid2D carrying a named quantity (``transmission`` or ``photoresponse``)."""

    quantity: str = "transmission"
    units: str = "1"


def make_grid2d(b_axis: Grid1D, f_axis: Grid1D) -> Grid2D:
    return Grid2D(b_axis, f_axis)
