"""Run configuration: numeric tolerances, budgets, and a reproducibility digest."""
from __future__ import annotations

import dataclasses
import hashlib
import json

DEFAULT_CUTOFF = 60

# Tolerance registry.  These defaults are part of the toolkit contract;
# per-call overrides exist where an operation documents them.
TAIL_TOL = 1e-8          # refuse states with more truncated mass than this
HERM_TOL = 1e-12         # Hermiticity defect allowed on input operators
PSD_CLIP = -1e-10        # eigenvalues in [PSD_CLIP, 0) are clipped to 0
NORM_TOL = 1e-12         # ket normalization defect
SUPP_TOL = 1e-12         # relative eigenvalue floor defining operator support
SUPP_MASS_TOL = 1e-10    # ket mass allowed outside a reference support
GRID_DELTA = 1e-3        # certification grid step / inflation factor
GOLDEN_REL_TOL = 1e-10   # golden-section interval tolerance
GOLDEN_MAX_ITER = 200
SOLVER_REL_GAP = 1e-7    # duality-gap target of the finite-dimensional solver
QUAD_ANGLES_EXP = 1      # K = 2**(d + QUAD_ANGLES_EXP) phase-quadrature points


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Bundle of knobs a single run commits to.

    The digest is a stable hash of the full configuration; outputs embed it so
    results can be traced back to the exact tolerances that produced them.
    """

    cutoff: int = DEFAULT_CUTOFF
    tail_tol: float = TAIL_TOL
    herm_tol: float = HERM_TOL
    psd_clip: float = PSD_CLIP
    supp_tol: float = SUPP_TOL
    supp_mass_tol: float = SUPP_MASS_TOL
    grid_delta: float = GRID_DELTA
    golden_rel_tol: float = GOLDEN_REL_TOL
    golden_max_iter: int = GOLDEN_MAX_ITER
    solver_rel_gap: float = SOLVER_REL_GAP
    seed: int = 0

    def digest(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True,
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]
