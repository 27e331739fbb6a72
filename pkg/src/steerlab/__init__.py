"""Steering-set analysis of open qubit dynamics with a passive reference system."""

__version__ = "0.1.0"

from .basis import ThetaMatrix, corr_index, state_from_theta, su_basis, theta_from_state
from .dynamics import bloch_closed_form, evolve_full, evolve_theta, u_coeffs, v_omega
from .estimators import ProcessTomography, SteeringEllipsoid
from .info import concurrence, cond_mutual_info, dpi_violation, mutual_info, ppt_separable, vn_entropy
from .states import (
    DensityMatrix,
    GenerationConfig,
    gen_pairwise_entangled,
    haar_unitary,
    pqt_state,
    slocc_canonicalize,
    validate_state,
)
from .steering import domain_rank, reduced_steer_s, sample_x, steer_se, steering_ellipsoid
from .tomography import DynamicalMap, MapStatus, apply_map, b_negativity, is_cp, reconstruct_map

__all__ = [
    "DensityMatrix",
    "DynamicalMap",
    "GenerationConfig",
    "MapStatus",
    "ProcessTomography",
    "SteeringEllipsoid",
    "ThetaMatrix",
    "apply_map",
    "b_negativity",
    "bloch_closed_form",
    "concurrence",
    "cond_mutual_info",
    "corr_index",
    "domain_rank",
    "dpi_violation",
    "evolve_full",
    "evolve_theta",
    "gen_pairwise_entangled",
    "haar_unitary",
    "is_cp",
    "mutual_info",
    "pqt_state",
    "ppt_separable",
    "reconstruct_map",
    "reduced_steer_s",
    "sample_x",
    "slocc_canonicalize",
    "state_from_theta",
    "steer_se",
    "steering_ellipsoid",
    "su_basis",
    "theta_from_state",
    "u_coeffs",
    "v_omega",
    "validate_state",
    "vn_entropy",
]
