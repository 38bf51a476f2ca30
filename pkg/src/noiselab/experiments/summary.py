"""Experiment results: tables, plot data and pass/fail/inconclusive verdicts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .. import __version__

__all__ = ["ExperimentSummary", "Verdict", "fit_slope", "mean_se"]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Verdict:
    id: str
    status: str
    observed: object
    tolerance: object
    detail: str = ""

    @classmethod
    def check(cls, id: str, ok: bool, observed, tolerance, detail: str = "") -> "Verdict":
        return cls(id, PASS if ok else FAIL, observed, tolerance, detail)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "observed": _plain(self.observed),
            "tolerance": _plain(self.tolerance),
            "detail": self.detail,
        }

    def line(self) -> str:
        return f"[{self.status.upper():>12}] {self.id}: observed={_fmt(self.observed)} tolerance={_fmt(self.tolerance)} {self.detail}".rstrip()


@dataclass
class ExperimentSummary:
    name: str
    config: dict
    config_hash: str
    tables: dict = field(default_factory=dict)  # name -> (columns, rows)
    plots: dict = field(default_factory=dict)  # name -> rows of (x, y, y_lo, y_hi)
    stats: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)

    def add(self, verdict: Verdict) -> Verdict:
        self.verdicts.append(verdict)
        return verdict

    def verdict(self, id: str) -> Verdict:
        for v in self.verdicts:
            if v.id == id:
                return v
        raise KeyError(id)

    @property
    def status(self) -> str:
        states = {v.status for v in self.verdicts}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def provenance(self) -> dict:
        return {"seed": self.config.get("seed"), "config_hash": self.config_hash, "version": __version__}

    def report(self) -> str:
        lines = [f"== {self.name} ({self.status}) seed={self.config.get('seed')} hash={self.config_hash[:12]}"]
        lines += ["  " + v.line() for v in self.verdicts]
        return "\n".join(lines)


def _plain(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return "inf" if math.isinf(x) else ("nan" if math.isnan(x) else x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.6g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def mean_se(x: np.ndarray, axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    n = x.shape[axis]
    m = x.mean(axis=axis)
    se = x.std(axis=axis, ddof=1) / math.sqrt(n) if n > 1 else np.full_like(m, np.nan)
    return m, se


def fit_slope(x, y) -> dict:
    """Least-squares slope of ``y`` on ``x`` with a 95% confidence interval."""
    res = stats.linregress(np.asarray(x, float), np.asarray(y, float))
    n = len(x)
    half = stats.t.ppf(0.975, n - 2) * res.stderr if n > 2 else math.nan
    return {
        "slope": float(res.slope),
        "intercept": float(res.intercept),
        "stderr": float(res.stderr),
        "ci": (float(res.slope - half), float(res.slope + half)),
    }
