"""Velocity lattice, spatial mesh, and moment computation.

The velocity lattice is built antisymmetrically (v[k] = vmax * m_k/(N-1)
with odd integers m_k for even N), so that +v and -v pair exactly in
floating point; momentum of k-symmetric states then cancels to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from kfks import kernels
from kfks.errors import DegenerateMomentsError, InvalidStateError

PERIODIC = "periodic"
OUTFLOW = "outflow"


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform lattice of N velocities on the symmetric interval [-vmax, vmax]."""

    n_velocities: int
    v_max: float
    v_min: float = field(init=False)
    dv: float = field(init=False)
    velocities: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n_velocities
        if n < 2:
            raise ValueError("need at least two lattice velocities")
        if not self.v_max > 0:
            raise ValueError("v_max must be positive")
        object.__setattr__(self, "v_min", -self.v_max)
        object.__setattr__(self, "dv", 2.0 * self.v_max / (n - 1))
        m = 2 * np.arange(n) - (n - 1)
        v = self.v_max * (m / (n - 1))
        v.flags.writeable = False
        object.__setattr__(self, "velocities", v)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform mesh of M cells on [0, L], cell-centered."""

    n_cells: int
    length: float = 1.0
    boundary_kind: str = PERIODIC
    dx: float = field(init=False)
    centers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("need at least one cell")
        if not self.length > 0:
            raise ValueError("domain length must be positive")
        if self.boundary_kind not in (PERIODIC, OUTFLOW):
            raise ValueError(f"unknown boundary kind {self.boundary_kind!r}")
        object.__setattr__(self, "dx", self.length / self.n_cells)
        x = (np.arange(self.n_cells) + 0.5) * self.dx
        x.flags.writeable = False
        object.__setattr__(self, "centers", x)

    @property
    def periodic(self) -> bool:
        return self.boundary_kind == PERIODIC


@dataclass(frozen=True)
class MomentField:
    """Conserved moments per cell plus derived primitives (1D monatomic).

    E stores dv * sum_k (v_k^2 / 2) f_k, so T = 2 E / rho - u^2; the raw
    second moment (2 E) is what the CSV output exposes for audit.
    """

    rho: np.ndarray
    mom: np.ndarray
    energy: np.ndarray
    u: np.ndarray
    temperature: np.ndarray

    @property
    def raw_second_moment(self) -> np.ndarray:
        return 2.0 * self.energy


def new_distribution(sgrid: SpatialGrid, vgrid: VelocityGrid) -> np.ndarray:
    """Allocate an (M, N) cell distribution."""
    return np.zeros((sgrid.n_cells, vgrid.n_velocities))


def compute_moments(f: np.ndarray, vgrid: VelocityGrid) -> MomentField:
    """Moments (rho, rho u, E) of f and the derived (u, T).

    Raises InvalidStateError on non-finite entries and DegenerateMomentsError
    (with the offending cell) when a density is non-positive; the run aborts
    rather than clamping.
    """
    if not np.isfinite(f).all():
        raise InvalidStateError("distribution contains non-finite values")
    M = f.shape[0]
    rho = np.empty(M)
    mom = np.empty(M)
    en = np.empty(M)
    kernels.moments(f, vgrid.velocities, vgrid.dv, rho, mom, en)
    if np.any(rho <= 0.0):
        j = int(np.argmax(rho <= 0.0))
        raise DegenerateMomentsError(f"non-positive density {rho[j]!r} in cell {j}", cell_index=j)
    u = mom / rho
    T = 2.0 * en / rho - u * u
    return MomentField(rho=rho, mom=mom, energy=en, u=u, temperature=T)


def sample_nodal(nodal, sgrid: SpatialGrid) -> np.ndarray:
    """Evaluate every velocity's shifted piecewise function at the cell centers."""
    return nodal.sample_at_centers()
