"""Truncated Gaussian white noise on the torus and its Besov regularity."""

__version__ = "0.1.0"

from .besov import NormReport, besov_norm, sobolev_h2_norm
from .errors import (
    ConfigurationError,
    DivergenceError,
    NoiselabError,
    PreconditionError,
    QuadratureError,
    ResourceError,
)
from .fourier_besov import FBNormTriple, fb_norms, w_stat
from .lattice import ShellSpec, enumerate_ball, shell_count, shell_count_limit
from .orlicz import hv_upper_bound, luxemburg_rho, theta
from .partition import SHARP, SMOOTH, PartitionProfile, phi_j, phi_sq_sum
from .randfield import RngSpec, SpectralField, field_from_coefficients, gamma_moment, sample_white_noise

__all__ = [
    "ConfigurationError",
    "DivergenceError",
    "FBNormTriple",
    "NoiselabError",
    "NormReport",
    "PartitionProfile",
    "PreconditionError",
    "QuadratureError",
    "ResourceError",
    "RngSpec",
    "SHARP",
    "SMOOTH",
    "ShellSpec",
    "SpectralField",
    "besov_norm",
    "enumerate_ball",
    "fb_norms",
    "field_from_coefficients",
    "gamma_moment",
    "hv_upper_bound",
    "luxemburg_rho",
    "phi_j",
    "phi_sq_sum",
    "sample_white_noise",
    "shell_count",
    "shell_count_limit",
    "sobolev_h2_norm",
    "theta",
    "w_stat",
]
