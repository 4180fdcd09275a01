"""Scalar kernels, Gram matrices and operator norms.

Inputs may be plain vectors, sampled functions (treated as the vector of
their samples) or standardized MFCC sequences (m x 13 matrices) for the
integral kernel variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist

__all__ = [
    "GaussianKernel",
    "LaplacianKernel",
    "IntegralMfccKernel",
    "ScalarKernel",
    "GramPair",
    "eval_kernel",
    "gram",
    "operator_norm",
]


@dataclass(frozen=True)
class GaussianKernel:
    """``k(a, b) = exp(-rho * ||a - b||^2)`` (rho = inverse squared lengthscale)."""

    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")


@dataclass(frozen=True)
class LaplacianKernel:
    """``k(a, b) = exp(-rho * ||a - b||)`` (rho = inverse lengthscale)."""

    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")


@dataclass(frozen=True)
class IntegralMfccKernel:
    """Mean of Gaussian kernels over aligned rows of two coefficient sequences.

    For sequences a, b of shape (m, n_coeff),
    ``k(a, b) = (1/m) * sum_j exp(-rho * sum_v (a[j, v] - b[j, v])^2)``.
    Sequences are expected to be pre-standardized (see datagen).
    """

    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")


ScalarKernel = Union[GaussianKernel, LaplacianKernel, IntegralMfccKernel]


def _as_points(points) -> np.ndarray:
    """Stack a point collection into an (n, ...) float array."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 0:
        raise ValueError("need a collection of points, got a scalar")
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise ValueError("point list must be non-empty")
    return pts


def eval_kernel(kernel: ScalarKernel, a, b) -> float:
    """Evaluate the kernel on a single pair of inputs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"input shape mismatch: {a.shape} vs {b.shape}")
    if isinstance(kernel, GaussianKernel):
        return float(np.exp(-kernel.rho * np.sum((a - b) ** 2)))
    if isinstance(kernel, LaplacianKernel):
        return float(np.exp(-kernel.rho * np.sqrt(np.sum((a - b) ** 2))))
    if isinstance(kernel, IntegralMfccKernel):
        if a.ndim != 2:
            raise ValueError(
                f"integral kernel expects (m, n_coeff) sequences, got shape {a.shape}"
            )
        rowsq = np.sum((a - b) ** 2, axis=1)
        return float(np.mean(np.exp(-kernel.rho * rowsq)))
    raise TypeError(f"unknown kernel: {kernel!r}")


def gram(kernel: ScalarKernel, points, points2=None) -> np.ndarray:
    """Gram matrix ``G[i, j] = k(points[i], points2[j])``.

    With a single argument the result is the symmetric Gram matrix of the
    collection.  Points are rows of an array: (n, d) vectors, (n,) scalars
    or (n, m, n_coeff) sequences for the integral kernel.
    """
    pts = _as_points(points)
    other = pts if points2 is None else _as_points(points2)
    if pts.shape[1:] != other.shape[1:]:
        raise ValueError(
            f"point shape mismatch: {pts.shape[1:]} vs {other.shape[1:]}"
        )
    if isinstance(kernel, IntegralMfccKernel):
        if pts.ndim != 3:
            raise ValueError(
                f"integral kernel expects (n, m, n_coeff) input, got shape {pts.shape}"
            )
        # pairwise per-row squared distances via the polarization identity
        sq_a = np.einsum("imv,imv->im", pts, pts)
        sq_b = np.einsum("jmv,jmv->jm", other, other)
        cross = np.einsum("imv,jmv->ijm", pts, other)
        rowsq = sq_a[:, None, :] + sq_b[None, :, :] - 2.0 * cross
        g = np.mean(np.exp(-kernel.rho * np.maximum(rowsq, 0.0)), axis=2)
    elif isinstance(kernel, GaussianKernel):
        g = np.exp(-kernel.rho * cdist(pts, other, "sqeuclidean"))
    elif isinstance(kernel, LaplacianKernel):
        g = np.exp(-kernel.rho * cdist(pts, other, "euclidean"))
    else:
        raise TypeError(f"unknown kernel: {kernel!r}")
    if points2 is None:
        g = 0.5 * (g + g.T)  # kill round-off asymmetry from cdist
    return g


def operator_norm(g: np.ndarray, max_iters: int = 10_000, rtol: float = 1e-10) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix.

    Power iteration with a deterministic seeded start vector; falls back to
    a full symmetric eigensolve if the iteration has not stabilized after
    ``max_iters`` steps.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {g.shape}")
    n = g.shape[0]
    if n == 1:
        return float(abs(g[0, 0]))
    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    previous = 0.0
    for _ in range(max_iters):
        w = g @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        estimate = abs(float(v @ (g @ v)))
        if abs(estimate - previous) <= rtol * max(estimate, 1e-300):
            return estimate
        previous = estimate
    return float(np.max(np.abs(np.linalg.eigvalsh(g))))


@dataclass(frozen=True)
class GramPair:
    """Gram matrices of the decomposable kernel: inputs (n x n), locations (m x m)."""

    kx: np.ndarray
    ktheta: np.ndarray

    def __post_init__(self):
        kx = np.asarray(self.kx, dtype=float)
        kt = np.asarray(self.ktheta, dtype=float)
        for name, g in (("kx", kx), ("ktheta", kt)):
            if g.ndim != 2 or g.shape[0] != g.shape[1]:
                raise ValueError(f"{name} must be square, got shape {g.shape}")
            if np.max(np.abs(g - g.T), initial=0.0) > 1e-12:
                raise ValueError(f"{name} is not symmetric within 1e-12")
            eigs = np.linalg.eigvalsh(g)
            if eigs[0] < -1e-8 * max(eigs[-1], 0.0):
                raise ValueError(
                    f"{name} is not positive semi-definite "
                    f"(min eigenvalue {eigs[0]:.3e}, max {eigs[-1]:.3e})"
                )
        kx = kx.copy()
        kt = kt.copy()
        kx.setflags(write=False)
        kt.setflags(write=False)
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ktheta", kt)

    @property
    def n(self) -> int:
        return self.kx.shape[0]

    @property
    def m(self) -> int:
        return self.ktheta.shape[0]
