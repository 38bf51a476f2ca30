"""Periodic Besov norms of truncated spectral fields, and the p = 2 Sobolev norm."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import partition
from .errors import PreconditionError
from .randfield import SpectralField
from .synthesis import DEFAULT_MAX_REFINEMENTS, DEFAULT_OSF, DEFAULT_QUADRATURE_TOL, block_band_limit, block_lp_norms

__all__ = [
    "NormReport",
    "aggregate_levels",
    "besov_norm",
    "block_norms",
    "complete_level_count",
    "level_range",
    "sobolev_h2_norm",
]

LevelPolicy = Literal["complete", "all"]


@dataclass
class NormReport:
    """A norm value with its per-level contributions.

    ``per_level`` lists ``(j, weighted)`` for every nonzero level;
    ``value`` aggregates only the levels in ``complete_levels``.
    """

    value: float
    per_level: list
    block_norms: list
    complete_levels: tuple
    incomplete_levels: tuple
    parameters: dict
    converged: dict = field(default_factory=dict)
    approximate: bool = False

    def to_dict(self) -> dict:
        return {
            "value": _json_float(self.value),
            "per_level": [[j, _json_float(v)] for j, v in self.per_level],
            "block_norms": [[j, _json_float(v)] for j, v in self.block_norms],
            "complete_levels": list(self.complete_levels),
            "incomplete_levels": list(self.incomplete_levels),
            "parameters": {k: _json_float(v) if isinstance(v, float) else v for k, v in self.parameters.items()},
            "converged": {str(k): v for k, v in self.converged.items()},
            "approximate": self.approximate,
        }


def _json_float(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def level_range(N: int) -> int:
    """Number of levels ``j = 0..L-1`` that can be nonzero for cutoff ``N``."""
    return partition.max_level(N * N) + 1


def complete_level_count(N: int) -> int:
    """Levels ``j`` with ``2^(j+1) <= N``, i.e. fully resolved by the cutoff."""
    j = 0
    while 2 ** (j + 1) <= N:
        j += 1
    return j


def aggregate_levels(weighted: np.ndarray, q: float) -> np.ndarray:
    """``l^q`` norm over the last axis."""
    weighted = np.asarray(weighted, dtype=float)
    if weighted.shape[-1] == 0:
        return np.zeros(weighted.shape[:-1])
    if math.isinf(q):
        return weighted.max(axis=-1)
    return (weighted**q).sum(axis=-1) ** (1.0 / q)


def block_norms(
    indices: np.ndarray,
    coeffs: np.ndarray,
    d: int,
    N: int,
    profile,
    p: float,
    levels: int | None = None,
    **quad,
) -> tuple[np.ndarray, list]:
    """``||f_j||_{L^p}`` for ``j < levels`` and a batch of coefficient rows.

    Returns an array of shape ``(batch, levels)`` and per-level quadrature
    info dicts.
    """
    coeffs = np.atleast_2d(coeffs)
    if levels is None:
        levels = level_range(N)
    table = {j: (pos, w) for j, pos, w in partition.level_table(profile, _k2(indices))}
    out = np.zeros((coeffs.shape[0], levels))
    infos = []
    for j in range(levels):
        if j not in table:
            infos.append({"M": None, "converged": True, "approximate": False})
            continue
        pos, w = table[j]
        vals, info = block_lp_norms(indices[pos], coeffs[:, pos] * w, d, block_band_limit(j, N), p, **quad)
        out[:, j] = vals
        infos.append(info)
    return out, infos


def _k2(indices):
    indices = np.asarray(indices, dtype=np.int64)
    return (indices * indices).sum(axis=1)


def besov_norm(
    field: SpectralField,
    s: float,
    p: float,
    q: float,
    profile="sharp",
    osf: int = DEFAULT_OSF,
    *,
    quadrature_tol: float = DEFAULT_QUADRATURE_TOL,
    max_refinements: int = DEFAULT_MAX_REFINEMENTS,
    levels: LevelPolicy | None = None,
) -> NormReport:
    """``||f||_{B^s_{p,q}} = || (2^{js} ||f_j||_{L^p})_j ||_{l^q}``.

    For white-noise fields only levels with ``2^(j+1) <= N`` are aggregated
    by default (the others are truncated by the cutoff); deterministic
    fields use every level.  Pass ``levels="all"`` or ``"complete"`` to
    override.
    """
    if not (p >= 1 and q >= 1):
        raise PreconditionError(f"p and q must lie in [1, inf], got p={p}, q={q}")
    profile = partition.as_profile(profile)
    L = level_range(field.N)
    norms, infos = block_norms(
        field.indices,
        field.coefficients,
        field.d,
        field.N,
        profile,
        p,
        L,
        osf=osf,
        tol=quadrature_tol,
        max_refinements=max_refinements,
    )
    norms = norms[0]
    weighted = 2.0 ** (s * np.arange(L)) * norms
    if levels is None:
        levels = "complete" if field.is_random else "all"
    n_complete = complete_level_count(field.N) if levels == "complete" else L
    n_complete = min(n_complete, L)
    if n_complete == 0:
        raise PreconditionError(f"cutoff N={field.N} resolves no complete level")
    value = float(aggregate_levels(weighted[:n_complete], q))
    return NormReport(
        value=value,
        per_level=[(j, float(weighted[j])) for j in range(L)],
        block_norms=[(j, float(norms[j])) for j in range(L)],
        complete_levels=tuple(range(n_complete)),
        incomplete_levels=tuple(range(n_complete, L)),
        parameters={"s": s, "p": p, "q": q, "profile": profile.name, "osf": osf, "d": field.d, "N": field.N},
        converged={j: infos[j]["converged"] for j in range(L)},
        approximate=math.isinf(p),
    )


def sobolev_h2_norm(field: SpectralField, s: float) -> float:
    """``(2 pi)^{d/2} (sum_k (1 + |k|^2)^s |f_hat(k)|^2)^{1/2}``."""
    w = (1.0 + field.squared_norms) ** s
    return float((2 * np.pi) ** (field.d / 2) * np.sqrt(np.sum(w * np.abs(field.coefficients) ** 2)))
