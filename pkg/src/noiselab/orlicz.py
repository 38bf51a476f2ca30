"""The Orlicz function ``Theta(x) = x^2 exp(-1/(2x^2))`` and its Luxemburg norm.

``rho(sigma) = inf{t > 0 : sum_n Theta(sigma_n / t) <= 1}`` controls the
expected supremum of a sequence of Gaussian vectors:
``E sup_n ||xi_n|| <= m + 3 sqrt(2) rho(sigma)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DivergenceError, PreconditionError

__all__ = [
    "DEFAULT_TOL",
    "THETA_UNIT",
    "WeightSequence",
    "hv_upper_bound",
    "luxemburg_rho",
    "theta",
    "theta_sum",
]

DEFAULT_TOL = 1e-10
_MAX_TERMS = 1 << 26


def theta(x):
    """``Theta(x) = x^2 exp(-1/(2x^2))`` with ``Theta(0) = 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise PreconditionError("Theta is defined for x >= 0")
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    with np.errstate(divide="ignore", under="ignore", over="ignore"):
        out[pos] = xp * xp * np.exp(-0.5 / (xp * xp))
    return out if out.ndim else float(out)


def _theta_unit() -> float:
    # Theta(u) = 1 is increasing in u; plain bisection on [1, 2]
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if theta(mid) < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps:
            break
    return hi


THETA_UNIT = _theta_unit()
"""The root ``u*`` of ``Theta(u) = 1`` (about 1.19228)."""


@dataclass
class WeightSequence:
    """Nonnegative weights, finite or lazily generated.

    A lazy sequence needs ``term(n)`` for ``n >= start`` and a certificate
    ``tail_sq(n) >= sum_{m >= n} term(m)^2``; it is materialised up to the
    first ``n`` where the certified tail mass drops below the requested
    tolerance.
    """

    entries: Optional[np.ndarray] = None
    term: Optional[Callable[[np.ndarray], np.ndarray]] = None
    tail_sq: Optional[Callable[[int], float]] = None
    start: int = 1

    @classmethod
    def geometric(cls, alpha: float, start: int = 1, scale: float = 1.0) -> "WeightSequence":
        """``scale * alpha^n`` for ``n >= start``."""
        if not 0 <= alpha < 1:
            raise DivergenceError(f"geometric ratio {alpha} is not square summable")
        return cls(
            term=lambda n: scale * alpha ** np.asarray(n, dtype=float),
            tail_sq=lambda n: scale**2 * alpha ** (2 * n) / (1 - alpha**2),
            start=start,
        )

    def materialise(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        if self.entries is not None:
            arr = np.asarray(self.entries, dtype=float).ravel()
            if np.any(arr < 0) or np.any(np.isnan(arr)):
                raise PreconditionError("weights must be nonnegative numbers")
            if not np.isfinite(np.sum(arr * arr)):
                raise DivergenceError("weights are not square summable")
            return arr
        if self.term is None or self.tail_sq is None:
            raise DivergenceError("a lazy sequence needs a tail certificate")
        n = self.start + 1
        while self.tail_sq(n) > tol * tol:
            n = self.start + 2 * (n - self.start)
            if n - self.start > _MAX_TERMS:
                raise DivergenceError("tail certificate never falls below the tolerance")
        arr = np.asarray(self.term(np.arange(self.start, n)), dtype=float)
        if np.any(arr < 0):
            raise PreconditionError("weights must be nonnegative")
        return arr


def _as_array(seq, tol) -> np.ndarray:
    if isinstance(seq, WeightSequence):
        return seq.materialise(tol)
    return WeightSequence(entries=np.asarray(seq, dtype=float)).materialise(tol)


def theta_sum(sigmas: np.ndarray, t: float) -> float:
    return float(np.sum(theta(sigmas / t)))


def luxemburg_rho(seq, tol: float = DEFAULT_TOL) -> float:
    """Luxemburg norm ``inf{t > 0 : sum Theta(sigma_n / t) <= 1}`` by bisection.

    ``t -> sum Theta(sigma_n / t)`` is continuous and strictly decreasing, so
    the infimum is the unique root of ``sum Theta(sigma_n / t) = 1``.  The
    returned ``t`` satisfies the defining inequality.
    """
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    sig = _as_array(seq, tol)
    sig = sig[sig > 0]
    if sig.size == 0:
        return 0.0
    smax = float(sig.max())
    # Theta(smax/t) > 1 below smax/u*; Theta(x) < x^2 gives sum < 1 at t = ||sigma||_2
    lo = smax / THETA_UNIT
    if theta_sum(sig, lo) <= 1.0:
        return lo
    hi = max(float(np.sqrt(np.sum(sig * sig))), smax)
    while theta_sum(sig, hi) > 1.0:
        lo, hi = hi, 2.0 * hi
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if theta_sum(sig, mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return hi


def hv_upper_bound(m: float, sigmas, tol: float = DEFAULT_TOL) -> float:
    """``m + 3 sqrt(2) rho(sigmas)``: bound on ``E sup_n ||xi_n||``."""
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    return m + 3.0 * math.sqrt(2.0) * luxemburg_rho(sigmas, tol)
