"""Dyadic partitions of unity evaluated at lattice frequencies.

Two radial profiles are provided.  The *sharp* profile is the indicator of
``(2^(-1/2), 2^(1/2)]``; on the lattice its dilates are exactly the
indicators of the disjoint half-width shells, so ``phi_j = 1`` on shell ``j``.
The *smooth* profile is the usual difference ``eta(r) - eta(2r)`` of a
C-infinity cut-off ``eta`` that equals 1 on ``[0, a]`` and 0 on ``[b, inf)``.

Level 0 is always computed as one minus the sum of the higher levels, so
the partition identity holds by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence, Union

import numpy as np

from . import lattice
from .errors import ConfigurationError, PreconditionError

__all__ = [
    "PartitionProfile",
    "SHARP",
    "SMOOTH",
    "as_profile",
    "level_table",
    "max_level",
    "phi",
    "phi_j",
    "phi_j_values",
    "phi_sq_sum",
    "smooth_step",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PartitionProfile:
    kind: Literal["sharp", "smooth"] = "sharp"
    a: float = SQRT2
    b: float = 2.0

    def __post_init__(self):
        if self.kind not in ("sharp", "smooth"):
            raise ConfigurationError(f"unknown partition profile {self.kind!r}")
        if self.kind == "smooth" and not (SQRT2 <= self.a < self.b <= 2.0):
            raise ConfigurationError(
                f"smooth profile needs sqrt(2) <= a < b <= 2, got a={self.a}, b={self.b}"
            )

    @property
    def name(self) -> str:
        if self.kind == "sharp":
            return "sharp"
        return f"smooth(a={self.a:.6g},b={self.b:.6g})"


SHARP = PartitionProfile("sharp")
SMOOTH = PartitionProfile("smooth")

ProfileLike = Union[PartitionProfile, str]


def as_profile(profile: ProfileLike) -> PartitionProfile:
    if isinstance(profile, PartitionProfile):
        return profile
    if profile == "sharp":
        return SHARP
    if profile == "smooth":
        return SMOOTH
    raise ConfigurationError(f"unknown partition profile {profile!r}")


def _h(x):
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(x):
    """C-infinity step: 0 for ``x <= 0``, 1 for ``x >= 1``."""
    x = np.asarray(x, dtype=float)
    hx = _h(x)
    return hx / (hx + _h(1.0 - x))


def _eta(profile: PartitionProfile, r):
    return smooth_step((profile.b - np.asarray(r, dtype=float)) / (profile.b - profile.a))


def phi(profile: ProfileLike, r):
    """Radial profile value(s) at ``r >= 0``, in ``[0, 1]``."""
    profile = as_profile(profile)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise PreconditionError("phi is defined for r >= 0")
    if profile.kind == "sharp":
        out = ((r > 2**-0.5) & (r <= SQRT2)).astype(float)
    else:
        out = _eta(profile, r) - _eta(profile, 2.0 * r)
    return out if out.ndim else float(out)


def max_level(k2_max: int) -> int:
    """Largest ``j`` such that ``phi_j`` can be nonzero below ``|k|^2 <= k2_max``.

    Uses that ``phi_j`` vanishes for ``|k| < 2^(j-1)`` and ``j >= 1``.
    """
    if k2_max <= 0:
        return 0
    j = 0
    while 4 ** j <= k2_max:  # 2^(j+1-1) <= |k|_max
        j += 1
    return j


def _phi_pos(profile: PartitionProfile, j: int, k2: np.ndarray) -> np.ndarray:
    # j >= 1
    if profile.kind == "sharp":
        return lattice.shell_mask(k2, j, "half").astype(float)
    return np.asarray(phi(profile, np.sqrt(k2.astype(float)) / 2.0**j), dtype=float)


def phi_j_values(profile: ProfileLike, j: int, k2) -> np.ndarray:
    """``phi_j(k)`` for an array of integer squared norms ``k2 = |k|^2``."""
    profile = as_profile(profile)
    if j < 0:
        raise PreconditionError("level j must be >= 0")
    k2 = np.asarray(k2, dtype=np.int64)
    if j >= 1:
        return _phi_pos(profile, j, k2)
    top = max_level(int(k2.max()) if k2.size else 0)
    tail = np.zeros(k2.shape, dtype=float)
    for jj in range(1, top + 2):
        tail += _phi_pos(profile, jj, k2)
    return 1.0 - tail


def phi_j(profile: ProfileLike, j: int, k: Sequence[int]) -> float:
    """``phi_j`` at a single lattice point ``k``."""
    k2 = int(sum(int(c) * int(c) for c in k))
    return float(phi_j_values(profile, j, np.array([k2]))[0])


def level_table(profile: ProfileLike, k2: np.ndarray) -> list[tuple[int, np.ndarray, np.ndarray]]:
    """Sparse partition weights for a fixed index set.

    Returns ``[(j, positions, weights), ...]`` for every level with at least
    one nonzero weight among the squared norms ``k2``.
    """
    profile = as_profile(profile)
    k2 = np.asarray(k2, dtype=np.int64)
    top = max_level(int(k2.max()) if k2.size else 0)
    rows = []
    tail = np.zeros(k2.shape, dtype=float)
    for j in range(1, top + 2):
        w = _phi_pos(profile, j, k2)
        tail += w
        pos = np.flatnonzero(w)
        if pos.size:
            rows.append((j, pos, w[pos]))
    w0 = 1.0 - tail
    pos0 = np.flatnonzero(np.abs(w0) > 0)
    rows.insert(0, (0, pos0, w0[pos0]))
    return rows


@lru_cache(maxsize=256)
def _phi_sq_sum(profile: PartitionProfile, j: int, d: int) -> float:
    pts = lattice.ball_indices(d, 4 ** (j + 1))
    w = phi_j_values(profile, j, lattice.squared_norms(pts))
    return float(np.sum(w * w))


def phi_sq_sum(profile: ProfileLike, j: int, d: int) -> float:
    """``sum_k phi_j(k)^2`` over the lattice (finite: support is ``|k| <= 2^(j+1)``)."""
    if j < 0:
        raise PreconditionError("level j must be >= 0")
    return _phi_sq_sum(as_profile(profile), int(j), int(d))
