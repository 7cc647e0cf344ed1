"""Data containers passed between modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCALES = ("raw", "gumbel", "exponential", "frechet")


@dataclass
class SampleMatrix:
    """``n x (k+1)`` observations together with their marginal scale."""

    values: np.ndarray
    scale: str = "raw"
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.ndim != 2:
            raise ValueError("sample values must be a 2-D array")
        if self.scale not in SCALES:
            raise ValueError(f"unknown scale {self.scale!r}; expected one of {SCALES}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sample contains missing or non-finite values")
        if self.scale == "exponential" and np.any(vals < 0):
            raise ValueError("exponential-scale values must be nonnegative")
        if self.scale == "frechet" and np.any(vals <= 0):
            raise ValueError("Fréchet-scale values must be positive")
        self.values = vals
        if not self.labels:
            self.labels = [f"s{i}" for i in range(vals.shape[1])]
        if len(self.labels) != vals.shape[1]:
            raise ValueError("one label per column required")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k_plus_1(self) -> int:
        return self.values.shape[1]

    def columns(self, idx) -> "SampleMatrix":
        idx = list(idx)
        return SampleMatrix(self.values[:, idx], self.scale, [self.labels[i] for i in idx])


@dataclass
class ExceedanceSet:
    """Observations falling in an extremal set and their transformed values.

    ``region`` is ``"component"`` (pivot component large), ``"union"``
    (either of two components large) or ``"sum"`` (L1 norm of the Fréchet
    vector large). ``increments`` holds ``x_j - x_pivot`` rows for the first
    two, ``radii``/``omega`` the pseudo-polar coordinates for the last.
    """

    region: str
    n: int
    k_plus_1: int
    q: float
    threshold: float | np.ndarray
    indices: np.ndarray
    pivot: int | None = None
    increments: np.ndarray | None = None
    radii: np.ndarray | None = None
    omega: np.ndarray | None = None
    marginal_counts: np.ndarray | None = None
    dropped: int = 0

    @property
    def count(self) -> int:
        return int(len(self.indices))

    def log_ratios(self) -> np.ndarray:
        """``log(omega_j / omega_0)`` rows for spectral exceedances."""
        if self.omega is None:
            raise ValueError("log ratios are only defined for sum-type exceedances")
        logw = np.log(self.omega)
        return logw[:, 1:] - logw[:, :1]


@dataclass
class EstimateReport:
    estimator: str
    estimate: Any
    n_exceedances: int | None = None
    q: float | None = None
    diagnostics: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    # fitted model object (e.g. a VariogramSpec) and optimiser trace; not serialised
    model: Any = None
    trace: list[float] | None = None

    @property
    def lambda_sq(self):
        if isinstance(self.estimate, dict):
            raise AttributeError("parametric report has no lambda_sq")
        return self.estimate

    def to_dict(self) -> dict:
        est = self.estimate
        if isinstance(est, np.ndarray):
            estimates: Any = {"lambda_sq": est.tolist()}
        elif isinstance(est, dict):
            estimates = {k: float(v) for k, v in est.items()}
        else:
            estimates = {"lambda_sq": float(est)}
        return {
            "estimator": self.estimator,
            "estimates": estimates,
            "N": self.n_exceedances,
            "q": self.q,
            "diagnostics": _jsonable(self.diagnostics),
            "notes": list(self.notes),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
