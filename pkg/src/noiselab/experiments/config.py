"""Experiment configuration with pre-registered tolerances."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from ..errors import ConfigurationError
from ..lattice import MAX_DIMENSION
from ..partition import SQRT2, PartitionProfile

__all__ = ["DEFAULT_TOLERANCES", "EXPERIMENTS", "ExperimentConfig", "CouplingError"]

EXPERIMENTS = (
    "lln_besov",
    "lln_fb",
    "frontier",
    "mean_identity",
    "hv_check",
    "tail",
    "divergence",
    "logsup",
    "equivalence",
    "weak_variance",
)

DEFAULT_TOLERANCES = {
    "n_se": 3.0,  # standard errors allowed on Monte Carlo means
    "lln_rel": 0.05,  # Besov LLN relative error at the top level
    "fb_lln_rel": 0.10,
    "fb_lln_fraction": 0.95,
    "slope": 0.05,
    "doubling_lo": 1.6,
    "doubling_hi": 2.4,
    "min_octaves": 5,
    "min_trials_mean_identity": 1000,
    "min_trials_tail": 10000,
    "parseval_rel": 1e-10,
    "logsup_growth": 0.5,
    "max_growth": 0.05,
    "max_growth_fraction": 0.5,
    "running_sup_fraction": 0.9,
    "level_floor": 0.5,
    "level_ceiling": 5.0,
    "variance_floor": 1.0,
    "corr_abs": 0.05,
    "equivalence_rel": 1e-12,
    "exp_moment_ratio": 2.0,
    "weak_variance_rel": 1e-9,
}


class CouplingError(ConfigurationError):
    """The cutoff does not resolve every requested level."""


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run.

    ``N`` defaults to ``2^(Jmax+1)``, the smallest cutoff for which every
    level ``j <= Jmax`` is complete.  List-valued fields are sweep axes used
    by some experiments only.
    """

    experiment: str = "lln_besov"
    d: int = 1
    p: float = 2.0
    q: float = math.inf
    s: Optional[float] = None
    Jmax: int = 12
    N: Optional[int] = None
    trials: int = 100
    seed: int = 0
    partition: str = "sharp"
    smooth_a: float = SQRT2
    smooth_b: float = 2.0
    osf: int = 4
    quadrature_tol: float = 1e-6
    space: str = "besov"
    fb_variant: str = "dyadic"
    real_noise: bool = False
    threads: int = 1
    out: Optional[str] = None
    J_min: int = 6
    p_values: tuple = (1.0, 2.0, 4.0)
    q_values: tuple = (1.0, math.inf)
    s_offsets: tuple = (-0.25, 0.0, 0.25, 0.5)
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N is None:
            self.N = 2 ** (self.Jmax + 1)
        self.tolerances = {**DEFAULT_TOLERANCES, **(self.tolerances or {})}
        self.p_values = tuple(float(v) for v in self.p_values)
        self.q_values = tuple(float(v) for v in self.q_values)
        self.s_offsets = tuple(float(v) for v in self.s_offsets)
        self.validate()

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if not (_is_int(self.d) and 1 <= self.d <= MAX_DIMENSION):
            raise ConfigurationError(f"d must be an integer in [1, {MAX_DIMENSION}]")
        for name in ("p", "q"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v >= 1):
                raise ConfigurationError(f"{name} must lie in [1, inf], got {v!r}")
        for v in self.p_values + self.q_values:
            if not v >= 1:
                raise ConfigurationError(f"sweep exponents must lie in [1, inf], got {v!r}")
        for name in ("Jmax", "N", "trials", "seed", "osf", "threads", "J_min"):
            v = getattr(self, name)
            if not _is_int(v) or v < 0:
                raise ConfigurationError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.trials < 1 or self.osf < 2 or self.threads < 1 or self.N < 1:
            raise ConfigurationError("trials, threads, N must be >= 1 and osf >= 2")
        if self.seed >= 1 << 64:
            raise ConfigurationError("seed must fit in 64 bits")
        if self.space not in ("besov", "fourier_besov"):
            raise ConfigurationError(f"space must be 'besov' or 'fourier_besov', got {self.space!r}")
        if self.fb_variant not in ("sharp", "smooth", "dyadic", "all"):
            raise ConfigurationError(f"unknown fb_variant {self.fb_variant!r}")
        if not self.quadrature_tol > 0:
            raise ConfigurationError("quadrature_tol must be positive")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigurationError(f"unknown tolerance keys {sorted(unknown)}")
        self.profile()  # validates partition settings
        if self.N < 2 ** (self.Jmax + 1):
            raise CouplingError(f"N={self.N} < 2^(Jmax+1)={2 ** (self.Jmax + 1)}: levels up to Jmax are incomplete")

    def profile(self) -> PartitionProfile:
        if self.partition == "sharp":
            return PartitionProfile("sharp")
        if self.partition == "smooth":
            return PartitionProfile("smooth", self.smooth_a, self.smooth_b)
        raise ConfigurationError(f"partition must be 'sharp' or 'smooth', got {self.partition!r}")

    def tol(self, key: str) -> float:
        return self.tolerances[key]

    def replace(self, **changes) -> "ExperimentConfig":
        data = dataclasses.asdict(self)
        if "Jmax" in changes and "N" not in changes:
            data["N"] = None
        data.update(changes)
        return ExperimentConfig(**data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for k, v in list(out.items()):
            out[k] = _jsonable(v)
        return out

    def config_hash(self) -> str:
        """Hash of every field that influences results."""
        data = self.to_dict()
        for k in ("out", "threads"):
            data.pop(k, None)
        blob = json.dumps(data, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v
