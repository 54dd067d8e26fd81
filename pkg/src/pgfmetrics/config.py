"""Central numeric tolerances and search knobs shared across the package."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Every tolerance used by the library, in one place.

    All values are absolute unless noted otherwise.
    """

    normalization: float = 1e-9     # |sum(probs) - 1| accepted at construction
    clamp: float = 1e-15            # magnitudes below this become exact zeros
    negative_mass: float = 1e-12    # entries below -this are rejected outright
    mean_equality: float = 1e-12    # equal-mean pair generator target
    mean_gate: float = 1e-9         # order-2 metric finite/infinite decision
    coupling_marginal: float = 1e-10
    slack: float = 1e-9             # inequality violation threshold (rhs - lhs)
    degenerate_d2: float = 1e-14    # below this an order-2 distance counts as zero
    mass_defect: float = 1e-6       # ODE abort threshold on |1 - sum p|
    negative_prob: float = 1e-10    # ODE abort threshold on min p_n
    mean_drift: float = 1e-6        # ODE abort threshold on |mean(t) - mean(0)|


@dataclass(frozen=True)
class SupSearch:
    """Knobs for the sup-over-[0,1] polynomial maximization."""

    grid_size: int = 2048
    refine_tol: float = 1e-12       # golden-section interval width target


TOL = Tolerances()
SUP = SupSearch()


def config_digest(params: dict) -> str:
    """Short stable digest of a parameter mapping, for output provenance."""
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
