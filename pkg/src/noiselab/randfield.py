"""Complex standard Gaussians and truncated white-noise spectral fields.

Random numbers come from a counter-based Philox stream keyed by
``(seed, trial)``.  Inside a trial the coefficient of ``k`` is read at a fixed
stream position given by the rank of ``k`` in the order "squared norm, then
lexicographic".  That order does not depend on the cutoff, so fields with the
same seed and trial are nested: enlarging ``N`` only appends coefficients.

A complex standard Gaussian is produced as ``sqrt(E) * exp(2 pi i U)`` with
``E`` standard exponential and ``U`` uniform, both drawn from one 64-bit
output each.  This has exactly the law ``(g1 + i g2) / sqrt(2)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from . import lattice
from .errors import ConfigurationError, PreconditionError, ResourceError

__all__ = [
    "DEFAULT_COEFFICIENT_BUDGET",
    "RngSpec",
    "SpectralField",
    "canonical_rank",
    "field_from_coefficients",
    "gamma_moment",
    "log_sup_statistic",
    "pairing",
    "sample_coefficients",
    "sample_standard_complex",
    "sample_white_noise",
]

DEFAULT_COEFFICIENT_BUDGET = 1 << 24
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    """Seed of a counter-based stream family; one independent stream per trial."""

    seed: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) <= _MASK64):
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    def generator(self, trial: int) -> np.random.Generator:
        if trial < 0 or trial > _MASK64:
            raise ConfigurationError("trial index must be a 64-bit unsigned integer")
        key = (int(trial) << 64) | int(self.seed)
        return np.random.Generator(np.random.Philox(key=key))


def _complex_from_uniforms(u: np.ndarray) -> np.ndarray:
    u = u.reshape(u.shape[:-1] + (-1, 2))
    modulus = np.sqrt(-np.log1p(-u[..., 0]))
    return modulus * np.exp(2j * np.pi * u[..., 1])


def sample_standard_complex(rng: np.random.Generator, size=None):
    """Complex standard Gaussian(s): independent ``N(0, 1/2)`` parts, ``E|g|^2 = 1``."""
    n = 1 if size is None else int(np.prod(size))
    out = _complex_from_uniforms(rng.random(2 * n))
    if size is None:
        return complex(out[0])
    return out.reshape(size)


def gamma_moment(p: float) -> float:
    """``(E|g|^p)^(1/p) = Gamma(p/2 + 1)^(1/p)`` for a complex standard Gaussian."""
    if not p >= 1 or math.isinf(p):
        raise ConfigurationError(f"gamma_moment needs finite p >= 1, got {p!r}")
    return float(gamma_fn(p / 2 + 1) ** (1.0 / p))


@lru_cache(maxsize=64)
def _rank_table(d: int, radius_sq: int) -> np.ndarray:
    pts = lattice.ball_indices(d, radius_sq)
    k2 = lattice.squared_norms(pts)
    # lexsort: last key is primary; rows are already lexicographic
    order = np.lexsort((np.arange(len(pts)), k2))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    rank.setflags(write=False)
    return rank


def canonical_rank(indices: np.ndarray) -> np.ndarray:
    """Stream position of each lattice point (order: ``|k|^2``, then lexicographic)."""
    indices = np.asarray(indices, dtype=np.int64)
    d = indices.shape[1]
    r2 = int(lattice.squared_norms(indices).max()) if len(indices) else 0
    ball = lattice.ball_indices(d, r2)
    lookup = {tuple(map(int, p)): int(r) for p, r in zip(ball, _rank_table(d, r2))}
    return np.array([lookup[tuple(map(int, k))] for k in indices], dtype=np.int64)


@dataclass
class SpectralField:
    """Truncated Fourier coefficients ``k -> f_hat(k)`` for ``|k| <= N``.

    ``indices`` holds the lattice points of the ball of radius ``N`` in
    lexicographic order and ``coefficients`` the matching complex values.
    ``provenance`` is ``"deterministic"`` or a dict with seed, trial and
    noise kind.  White-noise fields are truncations of an infinite series;
    deterministic fields are exactly the function they describe.
    """

    d: int
    N: int
    indices: np.ndarray
    coefficients: np.ndarray
    provenance: Union[str, dict] = "deterministic"
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.coefficients = np.asarray(self.coefficients, dtype=complex)
        if self.indices.ndim != 2 or self.indices.shape[1] != self.d:
            raise ConfigurationError("indices must have shape (n, d)")
        if self.coefficients.shape != (self.indices.shape[0],):
            raise ConfigurationError("one coefficient per index required")
        if self.indices.size and lattice.squared_norms(self.indices).max() > self.N * self.N:
            raise PreconditionError("all stored indices must satisfy |k| <= N")

    @property
    def is_random(self) -> bool:
        return self.provenance != "deterministic"

    @property
    def squared_norms(self) -> np.ndarray:
        return lattice.squared_norms(self.indices)

    def coefficient(self, k: Sequence[int]) -> complex:
        """``f_hat(k)``; zero outside the stored ball."""
        if self._lookup is None:
            self._lookup = {tuple(map(int, p)): i for i, p in enumerate(self.indices)}
        i = self._lookup.get(tuple(int(c) for c in k))
        return 0j if i is None else complex(self.coefficients[i])

    def truncate(self, N: int) -> "SpectralField":
        keep = self.squared_norms <= N * N
        return SpectralField(self.d, N, self.indices[keep], self.coefficients[keep], self.provenance)


def field_from_coefficients(d: int, coeffs: Mapping[Sequence[int], complex], N: int | None = None) -> SpectralField:
    """Deterministic field on the full ball of radius ``N`` from a sparse map."""
    coeffs = {tuple(int(c) for c in k): complex(v) for k, v in coeffs.items()}
    if any(len(k) != d for k in coeffs):
        raise ConfigurationError("index length does not match dimension")
    if N is None:
        N = max((math.isqrt(sum(c * c for c in k) - 1) + 1 for k in coeffs if any(k)), default=0)
    pts = lattice.ball_indices(d, N * N)
    values = np.zeros(len(pts), dtype=complex)
    pos = {tuple(map(int, p)): i for i, p in enumerate(pts)}
    for k, v in coeffs.items():
        if k not in pos:
            raise PreconditionError(f"index {k} lies outside the ball of radius {N}")
        values[pos[k]] = v
    return SpectralField(d, N, pts, values)


def _check_budget(d: int, N: int, budget: int) -> None:
    if (2 * N + 1) ** d > budget:
        raise ResourceError(f"(2N+1)^d = {(2 * N + 1) ** d} exceeds the coefficient budget {budget}")


def _hermitian(indices: np.ndarray, gam: np.ndarray) -> np.ndarray:
    # pair k with -k: keep the value of the point whose first nonzero coordinate is positive
    n = len(indices)
    mirror = n - 1 - np.arange(n)  # ball is symmetric and lexicographic => -k sits at n-1-i
    nz = indices != 0
    first = np.where(nz.any(axis=1), indices[np.arange(n), nz.argmax(axis=1)], 0)
    out = gam.copy()
    neg = first < 0
    out[..., neg] = np.conj(gam[..., mirror[neg]])
    zero = first == 0
    out[..., zero] = np.sqrt(2.0) * gam[..., zero].real
    return out


def sample_coefficients(
    d: int,
    N: int,
    rng: RngSpec,
    trials: Iterable[int],
    *,
    real: bool = False,
    threads: int = 1,
    budget: int = DEFAULT_COEFFICIENT_BUDGET,
) -> tuple[np.ndarray, np.ndarray]:
    """White-noise coefficients for several trials.

    Returns ``(indices, coeffs)`` with ``coeffs[t]`` the coefficients of
    trial ``trials[t]`` on the lexicographic ball of radius ``N``.  The result
    does not depend on ``threads``.
    """
    if N < 1:
        raise PreconditionError("cutoff N must be >= 1")
    _check_budget(d, N, budget)
    indices = lattice.ball_indices(d, N * N)
    rank = _rank_table(d, N * N)
    n = len(indices)
    trials = list(trials)
    out = np.empty((len(trials), n), dtype=complex)

    def fill(t):
        u = rng.generator(trials[t]).random(2 * n)
        out[t] = _complex_from_uniforms(u)[rank]

    if threads > 1 and len(trials) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(len(trials))))
    else:
        for t in range(len(trials)):
            fill(t)
    if real:
        out = _hermitian(indices, out)
    return indices, out


def sample_white_noise(
    d: int,
    N: int,
    rng: RngSpec,
    trial: int = 0,
    *,
    real: bool = False,
    budget: int = DEFAULT_COEFFICIENT_BUDGET,
) -> SpectralField:
    """Truncation ``sum_{|k| <= N} g_k e_k`` of complex Gaussian white noise."""
    indices, coeffs = sample_coefficients(d, N, rng, [trial], real=real, budget=budget)
    prov = {"seed": int(rng.seed), "trial": int(trial), "noise": "real" if real else "complex"}
    return SpectralField(d, N, indices, coeffs[0], prov)


def pairing(test: SpectralField, noise: SpectralField) -> complex:
    """``<f, W> = sum_k g_k f_hat(-k)``."""
    total = 0j
    for k, g in zip(noise.indices, noise.coefficients):
        total += g * test.coefficient(-k)
    return total


def log_sup_statistic(field: SpectralField) -> float:
    """``max_{1 <= |k| <= N} |f_hat(k)| / sqrt(log(|k|^d + 1))``."""
    k2 = field.squared_norms
    nz = k2 > 0
    if not nz.any():
        return 0.0
    r = np.sqrt(k2[nz].astype(float))
    return float(np.max(np.abs(field.coefficients[nz]) / np.sqrt(np.log(r**field.d + 1.0))))
