"""Physical constants (CODATA 2018) and the handful of unit conversions used here.

All public quantities in the package are SI: tesla, hertz (ordinary, not
angular), joule, metre, second, ohm. Angular frequencies are formed on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysConstants:
    e: float = 1.602176634e-19  # C, exact
    h: float = 6.62607015e-34  # J s, exact
    kB: float = 1.380649e-23  # J/K, exact
    m_e: float = 9.1093837015e-31  # kg, CODATA 2018
    hbar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hbar", self.h / (2.0 * math.pi))


CODATA2018 = PhysConstants()

# module-level shorthands
E = CODATA2018.e
H = CODATA2018.h
HBAR = CODATA2018.hbar
KB = CODATA2018.kB
M_E = CODATA2018.m_e

GHZ = 1e9
PS = 1e-12
UM = 1e-6
CM2 = 1e-4  # m^2


def ghz_to_hz(f):
    return f * GHZ


def hz_to_ghz(f):
    return f / GHZ


def per_cm2_to_per_m2(n):
    return n / CM2


def per_m2_to_per_cm2(n):
    return n * CM2


def cm2_per_vs_to_m2_per_vs(mu):
    return mu * CM2


def m2_per_vs_to_cm2_per_vs(mu):
    return mu / CM2
