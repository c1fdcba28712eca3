"""Pentagram maps on twisted polygons in the Grassmannian Gr(n, mn)."""

from .core import (
    InvariantChain,
    TwistedLift,
    build_Q,
    extract_invariants,
    gauge_transform,
    is_regular,
    monodromy,
    random_chain,
    random_regular_lift,
    reconstruct_lift,
)
from .errors import GrassPentaError
from .lax import (
    ScalingSpec,
    SpectralCurve,
    apply_scaling,
    build_N_mu,
    build_Q_mu,
    decompose_columns,
    degree_check_unnormalized,
    lambda_degree_check,
    scaling_commutation_check,
    spectral_curve,
    spectral_samples,
)
from .normalize import GaugeData, normalize_chain, normalize_lift, solve_delta
from .oracle import classical_pentagram_rp2, cramer_solve, exact_det, exact_rank
from .pentamap import build_N, intersect, map_algebraic_unnormalized, map_geometric, map_moduli

__version__ = "0.1.0"
