"""kfks: a 1D discrete-velocity BGK solver.

Four semi-Lagrangian schemes (SL-Upwind, SL-MUSCL, FKS, R-FKS) sharing an
exactly conservative discrete-Maxwellian relaxation, plus the benchmark
problems and diagnostics used to compare them.
"""

from kfks.diagnostics import RunMetrics, convergence_order, front_width, total_variation
from kfks.equilibrium import EquilibriumParams, discrete_maxwellian, maxwellian_pointwise
from kfks.grids import (
    MomentField,
    SpatialGrid,
    VelocityGrid,
    compute_moments,
    sample_nodal,
)
from kfks.kernels import BACKEND_NAME
from kfks.problems import ProblemSpec, init_oscillating, init_smooth, init_sod, apply_outflow
from kfks.reconstruction import NodalDistribution, evaluate_foot_point, van_leer_slopes
from kfks.schemes import (
    SCHEMES,
    SchemeState,
    advance,
    compute_dt,
    make_state,
    resolve_node_maxwellian,
    step,
    step_fks,
    step_rfks,
    step_sl,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "EquilibriumParams",
    "MomentField",
    "NodalDistribution",
    "ProblemSpec",
    "RunMetrics",
    "SCHEMES",
    "SchemeState",
    "SpatialGrid",
    "VelocityGrid",
    "advance",
    "apply_outflow",
    "compute_dt",
    "compute_moments",
    "convergence_order",
    "discrete_maxwellian",
    "evaluate_foot_point",
    "front_width",
    "init_oscillating",
    "init_smooth",
    "init_sod",
    "make_state",
    "maxwellian_pointwise",
    "resolve_node_maxwellian",
    "sample_nodal",
    "step",
    "step_fks",
    "step_rfks",
    "step_sl",
    "total_variation",
    "van_leer_slopes",
]
