"""Gapped spin chains: exact spectra, filtered operators, ground-state approximation."""

from .filtering import (
    GsApproxResult,
    BoundConstants,
    approx_projector_error,
    filtered_energy_bound,
    gaussian_filter,
    gs_projector_approx,
    local_surrogates,
    normalized_partial_trace,
    bound_constants,
)
from .lemmas import entropy_bound_eval, extremal_distribution, extremal_entropy, lattice_sphere_count, sphere_count
from .lieb_robinson import LrProbeResult, lr_probe
from .models import SpectralData, SpinChainModel, build_model, diagonalize, embed, entropy_profile, local_operator
from .regions import RegionSplit, hamiltonian_split, region_split

__all__ = [
    "GsApproxResult",
    "LrProbeResult",
    "BoundConstants",
    "RegionSplit",
    "SpectralData",
    "SpinChainModel",
    "approx_projector_error",
    "build_model",
    "diagonalize",
    "embed",
    "entropy_bound_eval",
    "entropy_profile",
    "extremal_distribution",
    "extremal_entropy",
    "filtered_energy_bound",
    "gaussian_filter",
    "gs_projector_approx",
    "hamiltonian_split",
    "lattice_sphere_count",
    "local_operator",
    "local_surrogates",
    "lr_probe",
    "normalized_partial_trace",
    "bound_constants",
    "region_split",
    "sphere_count",
]
