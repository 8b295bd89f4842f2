"""Kernel backend selection.

Imports the compiled extension when available, otherwise the numpy
implementation.  ``KFKS_KERNELS=python|compiled`` forces a choice
(``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os


def _load():
    choice = os.environ.get("KFKS_KERNELS", "auto")
    if choice not in ("auto", "python", "compiled"):
        raise ImportError(f"KFKS_KERNELS must be auto, python or compiled, got {choice!r}")
    if choice in ("auto", "compiled"):
        try:
            from kfks import _kernels as mod

            return mod
        except ImportError:
            if choice == "compiled":
                raise
    from kfks import _kernels_py as mod

    return mod


backend = _load()
BACKEND_NAME: str = backend.BACKEND_NAME

moments = backend.moments
analytic_params = backend.analytic_params
maxwellian_batch = backend.maxwellian_batch
equilibrium_field = backend.equilibrium_field
bgk_relax = backend.bgk_relax
van_leer_deltas = backend.van_leer_deltas
sl_upwind_transport = backend.sl_upwind_transport
sl_muscl_transport = backend.sl_muscl_transport
pc_sample = backend.pc_sample
pc_update = backend.pc_update
pl_sample = backend.pl_sample
pl_knot_update = backend.pl_knot_update
TAIL_MASS_WARN = backend.TAIL_MASS_WARN
