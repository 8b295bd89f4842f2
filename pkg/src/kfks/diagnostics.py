"""Post-processing: convergence orders, total variation, front widths, timing."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from kfks.errors import DomainError, PreconditionError


@dataclass(frozen=True)
class RunMetrics:
    """Wall-clock accounting for one run (time loop only, I/O excluded)."""

    scheme: str
    n_cells: int
    n_velocities: int
    n_cycles: int
    wall_time: float
    time_per_cycle: float = field(init=False)
    time_per_cell: float = field(init=False)

    def __post_init__(self):
        per_cycle = self.wall_time / self.n_cycles if self.n_cycles else 0.0
        object.__setattr__(self, "time_per_cycle", per_cycle)
        object.__setattr__(self, "time_per_cell", per_cycle / self.n_cells)


def nested_subsample(field_fine: np.ndarray, factor: int) -> np.ndarray:
    """Extract the coarse-aligned entries (1-based indices factor*i) of a
    refined-mesh vector."""
    n = field_fine.shape[0] // factor
    return field_fine[factor * np.arange(1, n + 1) - 1]


def convergence_order(rho_coarse, rho_mid, rho_fine):
    """Order estimate p = log2(sum|coarse - mid| / sum|mid - fine|).

    The three vectors are either sampled at common points (equal lengths) or
    raw cell values on meshes refined by 2 and 4 (then the nested index
    mapping i -> 2i -> 4i is applied).  Returns (p, num, den) with the two
    L1 difference sums for audit.
    """
    rho_coarse = np.asarray(rho_coarse, dtype=float)
    rho_mid = np.asarray(rho_mid, dtype=float)
    rho_fine = np.asarray(rho_fine, dtype=float)
    n = rho_coarse.shape[0]
    if rho_mid.shape[0] == 2 * n:
        rho_mid = nested_subsample(rho_mid, 2)
    if rho_fine.shape[0] == 4 * n:
        rho_fine = nested_subsample(rho_fine, 4)
    if rho_mid.shape[0] != n or rho_fine.shape[0] != n:
        raise PreconditionError("meshes must be nested by factors 2 and 4")
    num = float(np.abs(rho_coarse - rho_mid).sum())
    den = float(np.abs(rho_mid - rho_fine).sum())
    if den == 0.0:
        warnings.warn("zero fine-mesh difference; order is unresolved", RuntimeWarning, stacklevel=2)
        return math.inf, num, den
    return math.log2(num / den), num, den


def total_variation(field_values) -> float:
    """Sum of |f_{j+1} - f_j| with periodic wrap."""
    f = np.asarray(field_values, dtype=float)
    return float(np.abs(np.diff(f)).sum() + abs(f[0] - f[-1]))


def front_width(field_values, lo: float, hi: float, reversal_tol: float = 0.1) -> int:
    """Number of cells strictly inside the 10-90% band of a monotone front.

    ``lo`` and ``hi`` are the plateau values on either side of the window.
    Counter-monotone steps larger than ``reversal_tol`` times the jump raise
    an error suggesting a different window.
    """
    f = np.asarray(field_values, dtype=float)
    jump = hi - lo
    if jump == 0.0:
        raise DomainError("plateau values must differ")
    steps = np.diff(f)
    direction = np.sign(f[-1] - f[0])
    if direction == 0:
        direction = np.sign(jump)
    bad = steps * direction < -reversal_tol * abs(jump)
    if bad.any():
        raise DomainError(
            "field is not monotone across the probed window; pick a different window"
        )
    a, b = min(lo, hi), max(lo, hi)
    band_lo = a + 0.1 * (b - a)
    band_hi = b - 0.1 * (b - a)
    return int(np.count_nonzero((f > band_lo) & (f < band_hi)))
