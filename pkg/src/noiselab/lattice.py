"""Integer frequency lattice: Euclidean balls, dyadic shells and lattice counts.

All membership tests that sit on a dyadic boundary are done on the integer
squared norm ``|k|^2`` so that points with ``|k|^2 = 2^(2j+1)`` are never
misclassified by floating point rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import ConfigurationError, PreconditionError

__all__ = [
    "MAX_DIMENSION",
    "ShellSpec",
    "ball_indices",
    "ball_volume",
    "enumerate_ball",
    "shell_bounds_sq",
    "shell_count",
    "shell_count_limit",
    "shell_mask",
    "shell_members",
    "squared_norms",
]

MAX_DIMENSION = 4

ShellKind = Literal["half", "unit"]


@dataclass(frozen=True)
class ShellSpec:
    """A dyadic shell of the lattice.

    ``kind="half"`` is the half-width shell ``2^(j-1/2) < |k| <= 2^(j+1/2)``;
    these are pairwise disjoint in ``j``.  ``kind="unit"`` is the width-one
    shell ``2^(j-1) <= |k| <= 2^(j+1)``, which overlaps its neighbours.
    """

    j: int
    kind: ShellKind = "half"

    def __post_init__(self):
        if self.kind not in ("half", "unit"):
            raise ConfigurationError(f"unknown shell kind {self.kind!r}")
        if self.j < 1:
            raise PreconditionError(f"shell level must be >= 1, got {self.j}")


def _check_dimension(d: int) -> None:
    if not (isinstance(d, (int, np.integer)) and 1 <= d <= MAX_DIMENSION):
        raise ConfigurationError(f"dimension must be an integer in [1, {MAX_DIMENSION}], got {d!r}")


@lru_cache(maxsize=64)
def _ball_sq(d: int, radius_sq: int) -> np.ndarray:
    n = math.isqrt(radius_sq)
    axis = np.arange(-n, n + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    keep = (pts * pts).sum(axis=1) <= radius_sq
    out = np.ascontiguousarray(pts[keep])
    out.setflags(write=False)
    return out


def ball_indices(d: int, radius_sq: int) -> np.ndarray:
    """Lattice points with ``|k|^2 <= radius_sq`` as an ``(n, d)`` array.

    Rows are in lexicographic order.  The returned array is shared and
    read-only.
    """
    _check_dimension(d)
    if radius_sq < 0:
        raise PreconditionError("radius_sq must be nonnegative")
    return _ball_sq(int(d), int(radius_sq))


def enumerate_ball(d: int, R: float) -> np.ndarray:
    """All ``k`` in ``Z^d`` with ``|k| <= R``, lexicographically ordered."""
    _check_dimension(d)
    if not R >= 0:
        raise PreconditionError(f"radius must be nonnegative, got {R!r}")
    pts = ball_indices(d, math.floor(R * R) + 1)
    k2 = squared_norms(pts)
    return pts[np.sqrt(k2) <= R]


def squared_norms(indices: np.ndarray) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    return (indices * indices).sum(axis=-1)


def shell_bounds_sq(j: int, kind: ShellKind) -> tuple[int, bool, int]:
    """Integer squared-norm bounds ``(lo, lo_inclusive, hi)`` of a shell.

    Membership is ``lo < |k|^2 <= hi`` (or ``lo <= ...`` when inclusive).
    Level 0 of the width-one family is the ball ``|k| <= 2``, which is the
    support of the lowest partition function.
    """
    if kind == "half":
        if j < 1:
            raise PreconditionError("half-width shells start at j = 1")
        return 2 ** (2 * j - 1), False, 2 ** (2 * j + 1)
    if kind == "unit":
        if j < 0:
            raise PreconditionError("width-one shells start at j = 0")
        if j == 0:
            return 0, True, 4
        return 4 ** (j - 1), True, 4 ** (j + 1)
    raise ConfigurationError(f"unknown shell kind {kind!r}")


def shell_mask(k2: np.ndarray, j: int, kind: ShellKind) -> np.ndarray:
    """Boolean membership of squared norms ``k2`` in the shell ``(j, kind)``."""
    lo, inclusive, hi = shell_bounds_sq(j, kind)
    k2 = np.asarray(k2)
    lower = k2 >= lo if inclusive else k2 > lo
    return lower & (k2 <= hi)


def shell_members(d: int, spec: ShellSpec) -> np.ndarray:
    """Lattice points of a shell, lexicographically ordered."""
    _, _, hi = shell_bounds_sq(spec.j, spec.kind)
    pts = ball_indices(d, hi)
    return pts[shell_mask(squared_norms(pts), spec.j, spec.kind)]


def shell_count(d: int, spec: ShellSpec) -> int:
    return int(shell_members(d, spec).shape[0])


def ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in ``R^d``."""
    if d < 1:
        raise ConfigurationError("dimension must be >= 1")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def shell_count_limit(d: int, kind: ShellKind) -> float:
    """``lim_j 2^(-jd) #shell_j``: the lattice-density limit of shell counts."""
    v = ball_volume(d)
    if kind == "half":
        return v * (2 ** (d / 2) - 2 ** (-d / 2))
    if kind == "unit":
        return v * (2.0**d - 2.0**-d)
    raise ConfigurationError(f"unknown shell kind {kind!r}")
