"""Fourier-Besov norms computed directly on spectral coefficients.

Three equivalent norms are provided:

``sharp``
    ``(sum_j (sum_{k in A_j} (|k|+1)^{sp} |f_hat(k)|^p)^{q/p})^{1/q}``
    over the width-one shells ``A_j = {2^(j-1) <= |k| <= 2^(j+1)}``.
``smooth``
    the same with ``|phi_j(k) f_hat(k)|^p`` summed over all ``k``.
``dyadic``
    ``(sum_j 2^{sqj} (sum_{k in A_j} |f_hat(k)|^p)^{q/p})^{1/q}``.

``A_0`` is the ball ``|k| <= 2`` (the support of ``phi_0``).  Suprema
replace sums when ``p`` or ``q`` is infinite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lattice, partition
from .besov import aggregate_levels, complete_level_count, level_range
from .errors import PreconditionError
from .randfield import SpectralField

__all__ = [
    "FBNormTriple",
    "VARIANTS",
    "dyadic_bracket",
    "fb_level_values",
    "fb_norms",
    "w_stat",
]

VARIANTS = ("sharp", "smooth", "dyadic")


@dataclass
class FBNormTriple:
    sharp_value: float
    smooth_value: float
    dyadic_value: float
    parameters: dict
    per_level: dict = field(default_factory=dict)
    complete_levels: tuple = ()

    def value(self, variant: str) -> float:
        return {"sharp": self.sharp_value, "smooth": self.smooth_value, "dyadic": self.dyadic_value}[variant]

    def to_dict(self) -> dict:
        return {
            "sharp_value": self.sharp_value,
            "smooth_value": self.smooth_value,
            "dyadic_value": self.dyadic_value,
            "parameters": {k: (str(v) if isinstance(v, float) and math.isinf(v) else v) for k, v in self.parameters.items()},
            "per_level": {k: [[j, v] for j, v in rows] for k, rows in self.per_level.items()},
            "complete_levels": list(self.complete_levels),
        }


def _lp(values: np.ndarray, p: float) -> np.ndarray:
    if values.shape[-1] == 0:
        return np.zeros(values.shape[:-1])
    if math.isinf(p):
        return values.max(axis=-1)
    return (values**p).sum(axis=-1) ** (1.0 / p)


def fb_level_values(
    indices: np.ndarray,
    coeffs: np.ndarray,
    s: float,
    p: float,
    variant: str,
    levels: int,
    profile=partition.SMOOTH,
) -> np.ndarray:
    """Inner ``l^p`` values of each level for a batch of coefficient rows.

    Returns shape ``(batch, levels)``; the ``2^{sj}`` factor of the dyadic
    variant is included.
    """
    if variant not in VARIANTS:
        raise PreconditionError(f"unknown Fourier-Besov variant {variant!r}")
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    k2 = lattice.squared_norms(indices)
    mags = np.abs(coeffs)
    out = np.zeros((coeffs.shape[0], levels))
    if variant == "smooth":
        weight = (np.sqrt(k2) + 1.0) ** s
        table = {j: (pos, w) for j, pos, w in partition.level_table(profile, k2)}
        for j in range(levels):
            if j in table:
                pos, w = table[j]
                out[:, j] = _lp(weight[pos] * w * mags[:, pos], p)
        return out
    for j in range(levels):
        pos = np.flatnonzero(lattice.shell_mask(k2, j, "unit"))
        if variant == "sharp":
            vals = ((np.sqrt(k2[pos]) + 1.0) ** s) * mags[:, pos]
            out[:, j] = _lp(vals, p)
        else:
            out[:, j] = 2.0 ** (s * j) * _lp(mags[:, pos], p)
    return out


def fb_norms(
    field: SpectralField,
    s: float,
    p: float,
    q: float,
    profile=partition.SMOOTH,
    *,
    levels: str | None = None,
) -> FBNormTriple:
    """All three Fourier-Besov norms of ``field``.

    Level aggregation follows the same policy as
    :func:`noiselab.besov.besov_norm`: complete levels only for white noise
    unless ``levels="all"``.
    """
    if not (p >= 1 and q >= 1):
        raise PreconditionError(f"p and q must lie in [1, inf], got p={p}, q={q}")
    L = level_range(field.N)
    if levels is None:
        levels = "complete" if field.is_random else "all"
    n = min(complete_level_count(field.N), L) if levels == "complete" else L
    if n == 0:
        raise PreconditionError(f"cutoff N={field.N} resolves no complete level")
    values, per_level = {}, {}
    for variant in VARIANTS:
        lv = fb_level_values(field.indices, field.coefficients, s, p, variant, L, profile)[0]
        per_level[variant] = [(j, float(lv[j])) for j in range(L)]
        values[variant] = float(aggregate_levels(lv[:n], q))
    return FBNormTriple(
        values["sharp"],
        values["smooth"],
        values["dyadic"],
        parameters={"s": s, "p": p, "q": q, "profile": partition.as_profile(profile).name, "d": field.d, "N": field.N},
        per_level=per_level,
        complete_levels=tuple(range(n)),
    )


def w_stat(field: SpectralField, j: int, p: float) -> float:
    """``(sum_{2^(j-1) <= |k| <= 2^(j+1)} |f_hat(k)|^p)^{1/p}``."""
    if j < 0:
        raise PreconditionError("level j must be >= 0")
    mask = lattice.shell_mask(field.squared_norms, j, "unit")
    return float(_lp(np.abs(field.coefficients[mask]), p))


def dyadic_bracket(s: float) -> tuple[float, float]:
    """Constants ``(c1, c2)`` with ``c1 [f] <= ||f|| <= c2 [f]``.

    Follows from ``2^j / 2 <= |k| + 1 <= 4 * 2^j`` on the width-one shells.
    """
    if s <= 0:
        return 4.0**s, 2.0**-s
    return 2.0**-s, 4.0**s
