"""Piecewise representations and their transport machinery.

Three representations appear in the solver:

* shifted piecewise-constant functions (one per lattice velocity), whose
  pieces are cells of width dx centered on shifted nodes;
* shifted continuous piecewise-linear interpolants through the same nodes;
* cell-local limited linear polynomials (for the MUSCL scheme).

Shifted representations never re-project: transport only moves a scalar
offset per velocity, recomputed from the step count in closed form so that
a million steps accumulate no floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from kfks import kernels
from kfks.errors import DomainError, PreconditionError
from kfks.grids import SpatialGrid, VelocityGrid
from kfks.parallel import run_chunked

PIECEWISE_CONSTANT = "piecewise_constant"
PIECEWISE_LINEAR = "piecewise_linear_continuous"


@dataclass
class NodalDistribution:
    """Per-velocity node values plus a transport offset.

    ``values[k, i]`` is the node value of velocity k at the shifted position
    mod(x_i + s_k, L).  The offset s_k is recomputed from the step count
    (one fused multiply, not incremental accumulation).  A truncated final
    step is accounted separately in ``tail_time``.
    """

    values: np.ndarray  # (N, M)
    kind: str
    sgrid: SpatialGrid
    vgrid: VelocityGrid
    step_count: int = 0
    dt_base: float = 0.0
    tail_time: float = 0.0
    _wraps: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]
    _pending_lo: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]
    _r_mod: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.kind not in (PIECEWISE_CONSTANT, PIECEWISE_LINEAR):
            raise ValueError(f"unknown representation kind {self.kind!r}")
        if self.values.shape != (self.vgrid.n_velocities, self.sgrid.n_cells):
            raise ValueError("node values must have shape (N, M)")
        if self._wraps is None:
            self._wraps = np.zeros(self.vgrid.n_velocities, dtype=np.intp)

    @classmethod
    def from_cell_values(cls, f, kind, sgrid, vgrid) -> "NodalDistribution":
        """Nodes coincide with cell centers at construction time."""
        return cls(values=np.ascontiguousarray(f.T, dtype=float), kind=kind, sgrid=sgrid, vgrid=vgrid)

    # -- transport -------------------------------------------------------

    @property
    def elapsed_time(self) -> float:
        return self.step_count * self.dt_base + self.tail_time

    def displacements(self) -> np.ndarray:
        """Unwrapped transport distance per velocity, step_count * v * dt."""
        v = self.vgrid.velocities
        if self.tail_time == 0.0:
            return self.step_count * v * self.dt_base
        return v * (self.step_count * self.dt_base + self.tail_time)

    def offsets(self) -> np.ndarray:
        """Current shift s_k in [0, L) for every velocity."""
        return np.mod(self.displacements(), self.sgrid.length)

    def offset(self, k: int) -> float:
        return float(self.offsets()[k])

    def shift(self, dt: float) -> None:
        """Advance every velocity's representation by v_k * dt."""
        if dt <= 0.0:
            raise PreconditionError("time step must be positive")
        if self.tail_time == 0.0 and (self.dt_base == 0.0 or dt == self.dt_base):
            self.dt_base = dt
            self.step_count += 1
        else:
            self.tail_time += dt
        if not self.sgrid.periodic:
            self._record_wraps()

    def _record_wraps(self) -> None:
        # The wrap counter must flip in exactly the step where the sampling
        # map hands an edge cell over to the wrapped node, so it is derived
        # from the same mod-reduced offsets the samplers round (the unwrapped
        # displacement rounds differently near ties and can fire one step
        # early or late, leaking the opposite boundary's values).  The tie
        # itself is direction-asymmetric and dual between the two kinds: a
        # piece still owns the trailing edge cell when its node sits exactly
        # on the boundary (ceil convention), while a knot already serves the
        # leading edge cell there (floor convention).
        M = self.sgrid.n_cells
        a = self.offsets() / self.sgrid.dx
        if self.kind == PIECEWISE_CONSTANT:
            r_new = np.ceil(a - 0.5).astype(np.intp) % M
        else:
            r_new = np.floor(a + 0.5).astype(np.intp) % M
        if self._r_mod is None:
            self._r_mod = np.zeros(self.vgrid.n_velocities, dtype=np.intp)
        d = r_new - self._r_mod
        d = np.where(d > 1, d - M, d)
        d = np.where(d < -1, d + M, d)
        if np.any(np.abs(d) > 1):
            raise PreconditionError("representation moved more than one cell in a step")
        self._r_mod = r_new
        if self._pending_lo is None:
            self._pending_lo = self._wraps.copy()
        self._wraps = self._wraps + d

    def consume_wrap_events(self):
        """Per-velocity (w_old, w_new) wrap counters accumulated since last call."""
        if self._pending_lo is None:
            return None
        lo, hi = self._pending_lo, self._wraps
        self._pending_lo = None
        return lo, hi

    # -- evaluation ------------------------------------------------------

    def _lattice_coords(self):
        a = self.offsets() / self.sgrid.dx
        return a

    def sample_at_centers(self) -> np.ndarray:
        """Values at the M cell centers, shape (M, N)."""
        M, N = self.sgrid.n_cells, self.vgrid.n_velocities
        out = np.empty((M, N))
        a = self._lattice_coords()
        if self.kind == PIECEWISE_CONSTANT:
            r = np.ceil(a - 0.5).astype(np.intp)
            run_chunked(N, lambda lo, hi: kernels.pc_sample(self.values[lo:hi], r[lo:hi], out[:, lo:hi]))
        else:
            q = np.ceil(a).astype(np.intp)
            theta = q - a
            run_chunked(N, lambda lo, hi: kernels.pl_sample(self.values[lo:hi], q[lo:hi], theta[lo:hi], out[:, lo:hi]))
            if not self.sgrid.periodic:
                self._patch_seam_cells(out, a)
        return out

    def _patch_seam_cells(self, out, a) -> None:
        # Cells outside the knot hull take the nearest edge knot's value
        # (constant extension); at most one cell per edge is affected.
        M = self.sgrid.n_cells
        phi = np.mod(a + 0.5, 1.0)
        c = np.floor(a + 0.5).astype(np.intp)
        i_min = np.mod(-c, M)
        i_max = np.mod(i_min - 1, M)
        left = phi > 0.5
        right = phi < 0.5
        ks = np.arange(self.vgrid.n_velocities)
        out[0, ks[left]] = self.values[ks[left], i_min[left]]
        out[M - 1, ks[right]] = self.values[ks[right], i_max[right]]

    def evaluate(self, k: int, x) -> np.ndarray | float:
        """Evaluate velocity k's shifted piecewise function at positions x."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > self.sgrid.length):
            raise DomainError("position outside [0, L]")
        M = self.sgrid.n_cells
        dx = self.sgrid.dx
        s = self.offset(k)
        g = self.values[k]
        if self.kind == PIECEWISE_CONSTANT:
            i0 = np.floor((x - s) / dx).astype(np.intp) % M
            val = g[i0]
        else:
            t = (x - s) / dx - 0.5
            base = np.floor(t)
            i0 = base.astype(np.intp) % M
            theta = t - base
            val = (1.0 - theta) * g[i0] + theta * g[(i0 + 1) % M]
            if not self.sgrid.periodic:
                a = s / dx
                phi = np.mod(a + 0.5, 1.0)
                c = int(np.floor(a + 0.5))
                i_min = (-c) % M
                i_max = (i_min - 1) % M
                p_min = dx * phi
                p_max = p_min + self.sgrid.length - dx
                val = np.where(x < p_min, g[i_min], val)
                val = np.where(x > p_max, g[i_max], val)
        return val if val.ndim else float(val)

    def sample_at(self, x) -> np.ndarray:
        """Evaluate all velocities at positions x, shape (len(x), N)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty((x.size, self.vgrid.n_velocities))
        for k in range(self.vgrid.n_velocities):
            out[:, k] = self.evaluate(k, x)
        return out

    def locate_extreme_points(self, k: int) -> np.ndarray:
        """Node positions mod(x_i + s_k, L) where collision updates apply."""
        return np.mod(self.sgrid.centers + self.offset(k), self.sgrid.length)


def apply_wrap_reanchor(nodal: NodalDistribution) -> None:
    """Overwrite node values that rotated across the domain edge.

    Constant extrapolation in index space: the wrapped node takes its
    interior neighbor's value.  Called once per step for outflow runs.
    """
    events = nodal.consume_wrap_events()
    if events is None:
        return
    lo, hi = events
    M = nodal.sgrid.n_cells
    g = nodal.values
    for k in np.nonzero(lo != hi)[0]:
        w0, w1 = int(lo[k]), int(hi[k])
        while w0 < w1:
            w0 += 1
            i = (-w0) % M
            g[k, i] = g[k, (i + 1) % M]
        while w0 > w1:
            w0 -= 1
            i = (-w0 - 1) % M
            g[k, i] = g[k, (i - 1) % M]


def van_leer_slopes(f: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """Harmonic-mean limited slopes, zero at local extrema (per cell, per velocity)."""
    D = np.empty_like(f)
    kernels.van_leer_deltas(f, grid.periodic, D)
    return D / grid.dx


def evaluate_foot_point(f, slopes, grid: SpatialGrid, k: int, v_k: float, dt: float, x_j: float):
    """One cell's post-transport value for the SL schemes.

    With ``slopes=None`` (SL-Upwind): linear interpolation between the two
    cell centers bracketing the foot point x_j - v_k dt.  With slopes
    (SL-MUSCL): the cell mean of the advected limited reconstruction, which
    telescopes to exact conservation on periodic grids.
    """
    dx = grid.dx
    M = grid.n_cells
    alpha = v_k * dt / dx
    if abs(alpha) > 1.0 + 1e-12:
        raise PreconditionError(f"CFL violation: |v dt / dx| = {abs(alpha)!r} > 1")
    j = int(round(x_j / dx - 0.5))
    if not (0 <= j < M) or abs(x_j - (j + 0.5) * dx) > 1e-9 * dx:
        raise DomainError(f"x_j = {x_j!r} is not a cell center")

    def at(i):
        return f[i % M, k] if grid.periodic else f[min(max(i, 0), M - 1), k]

    if slopes is None:
        foot = x_j - v_k * dt
        m = int(np.floor(foot / dx - 0.5))
        xi = foot / dx - 0.5 - m
        return (1.0 - xi) * at(m) + xi * at(m + 1)

    def D(i):
        i = i % M if grid.periodic else min(max(i, 0), M - 1)
        return slopes[i, k] * dx

    a = abs(alpha)
    w = 0.5 * a * (1.0 - a)
    if alpha >= 0.0:
        return a * at(j - 1) + (1.0 - a) * f[j, k] + w * (D(j - 1) - D(j))
    return a * at(j + 1) + (1.0 - a) * f[j, k] - w * (D(j + 1) - D(j))


def evaluate_cell_poly(f, slopes, grid: SpatialGrid, x) -> np.ndarray:
    """Evaluate the SL cell-local representation at arbitrary positions.

    Piecewise constant when ``slopes`` is None, limited linear otherwise.
    Used to compare solutions across nested meshes at common points.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0) or np.any(x > grid.length):
        raise DomainError("position outside [0, L]")
    j = np.floor(x / grid.dx).astype(np.intp)
    j = np.clip(j, 0, grid.n_cells - 1)
    vals = f[j, :]
    if slopes is not None:
        offs = x - grid.centers[j]
        vals = vals + slopes[j, :] * offs[:, None]
    return vals
