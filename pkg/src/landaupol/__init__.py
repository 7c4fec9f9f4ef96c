"""Landau-polariton magneto-transport toolkit: branch dispersions, THz
transmission and photo-response maps, SdH transport with a cavity scattering
channel, and dispersion / quality-factor fitting."""
from .constants import CODATA2018, PhysConstants
from .grids import Grid1D, Grid2D, ResponseMap, make_grid2d
from .landau import (
    FermiState,
    LandauSpectrum,
    cyclotron_frequency,
    dipole_scale,
    dos_at_energy,
    fermi_state,
    filling_factor,
    magnetic_length,
)
from .params import CH140, CH205, RH, MaterialParams, ResonatorParams, derive_transport_lifetime
from .photoresponse import (
    DecayLocus,
    PhotoResponseParams,
    decay_loci,
    estimate_polariton_population,
    photoresponse_map,
    slice_by_filling,
)
from .polariton import (
    Branches,
    PolaritonModelKind,
    branches,
    branches_coupled_mode,
    branches_hopfield,
    dispersion_sweep,
    magneto_plasmon_frequency,
    transmission_map,
)
from .transport import TransportTrace, cavity_scattering_rate, drude_rho0, rho_xx_dark

__version__ = "0.1.0"
