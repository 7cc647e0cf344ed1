"""Fractal variograms with optional geometric anisotropy, and the induced
Hüsler-Reiss parameter matrix on a set of locations."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import hr_model


@dataclass(frozen=True)
class VariogramSpec:
    """``gamma(h) = ||V(beta, c) h / s||^alpha``.

    Without anisotropy ``V`` is the identity. ``V(beta, c)`` rotates by
    ``beta`` and stretches the second axis by ``c``.
    """

    alpha: float = 1.0
    s: float = 1.0
    beta: float = 0.0
    c: float = 1.0
    anisotropy: bool = False

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not self.s > 0.0:
            raise ValueError(f"s must be positive, got {self.s}")
        if not self.c > 0.0:
            raise ValueError(f"c must be positive, got {self.c}")

    @property
    def matrix(self) -> np.ndarray:
        return anisotropy_matrix(self.beta, self.c) if self.anisotropy else np.eye(2)

    def normalized(self) -> "VariogramSpec":
        """Canonical parameters for the same variogram: ``c >= 1``, ``beta in [0, pi)``.

        ``(beta, c, s)`` and ``(beta + pi/2, 1/c, s/c)`` give identical
        variograms, as do ``beta`` and ``beta + pi``.
        """
        if not self.anisotropy:
            return self
        beta, c, s = self.beta, self.c, self.s
        if c < 1.0:
            beta, c, s = beta + np.pi / 2.0, 1.0 / c, s / c
        beta = float(np.mod(beta, np.pi))
        # mod of a tiny negative number rounds up to pi
        if beta >= np.pi:
            beta = 0.0
        return replace(self, beta=beta, c=float(c), s=float(s))

    def params(self) -> dict:
        out = {"alpha": self.alpha, "s": self.s}
        if self.anisotropy:
            out.update(beta=self.beta, c=self.c)
        return out

    def __call__(self, h) -> np.ndarray:
        return variogram_eval(self, h)


def anisotropy_matrix(beta: float, c: float) -> np.ndarray:
    cb, sb = np.cos(beta), np.sin(beta)
    return np.array([[cb, -sb], [c * sb, c * cb]])


@dataclass
class LocationSet:
    points: np.ndarray
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] not in (1, 2):
            raise ValueError("locations must be 1-D or 2-D coordinates")
        self.points = pts
        if not self.labels:
            self.labels = [f"s{i}" for i in range(len(pts))]
        if len(self.labels) != len(pts):
            raise ValueError("one label per location required")
        if len(pts) > 1:
            d = pairwise_distances(pts)
            iu = np.triu_indices(len(pts), 1)
            if np.any(d[iu] == 0.0):
                raise ValueError("locations must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def transformed(self, spec: VariogramSpec) -> "LocationSet":
        """Locations in the space where ``spec`` is isotropic."""
        if not spec.anisotropy:
            return self
        return LocationSet(self.points @ spec.matrix.T, list(self.labels))


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)


def variogram_eval(spec: VariogramSpec, h, *, vector: bool | None = None) -> np.ndarray | float:
    """Evaluate ``spec`` at displacement(s) ``h``.

    By default a scalar is a 1-D displacement, an array whose last axis has
    length 1 or 2 holds displacement vectors, and any other array holds
    scalar displacements. Pass ``vector`` to override the guess.
    """
    h = np.asarray(h, dtype=float)
    if vector is None:
        vector = h.ndim >= 1 and h.shape[-1] in (1, 2)
    if spec.anisotropy:
        if h.shape[-1:] != (2,):
            raise ValueError("anisotropic variograms need 2-D displacements")
        norm = np.linalg.norm(h @ spec.matrix.T, axis=-1)
    elif vector:
        norm = np.linalg.norm(h, axis=-1)
    else:
        norm = np.abs(h)
    out = (norm / spec.s) ** spec.alpha
    return float(out) if np.ndim(out) == 0 else out


def variogram_matrix(spec: VariogramSpec, locs: LocationSet) -> np.ndarray:
    pts = locs.points
    if spec.anisotropy:
        if locs.dim != 2:
            raise ValueError("anisotropy requires 2-D locations")
        pts = pts @ spec.matrix.T
    return (pairwise_distances(pts) / spec.s) ** spec.alpha


def lambda_of_variogram(spec: VariogramSpec, locs: LocationSet, *, check: bool = True) -> np.ndarray:
    """Parameter matrix ``(gamma(t_i - t_j) / 4)_{ij}``."""
    if len(locs) < 2:
        raise ValueError("need at least two locations")
    lam = variogram_matrix(spec, locs) / 4.0
    if check:
        hr_model.psi_submatrix(lam)
    return lam


def ecf_curve(spec: VariogramSpec, distances) -> np.ndarray:
    """Extremal coefficient against (isotropic) distance."""
    h = np.asarray(distances, dtype=float)
    return 2.0 * hr_model.nx.std_normal_cdf(np.sqrt((np.abs(h) / spec.s) ** spec.alpha) / 2.0)
