"""Approximate eigendecomposition of the output-kernel integral operator.

The integral operator of a kernel on Theta is sampled on a grid: with
quadrature weights w the eigenproblem ``sum_i w_i k(theta, theta_i) psi(theta_i)
= delta * psi(theta)`` restricted to the grid becomes the symmetric
eigenproblem of ``W^(1/2) K W^(1/2)``.  Under uniform weights this is the
Gram matrix eigensystem with eigenvalues divided by m.  Eigenfunctions are
normalized to unit quadrature norm so that coefficient vectors live in the
same geometry as the function space, and extended off the grid by the
kernel interpolation formula.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .funcspace import DiscretizedFunction, Grid, GridMismatchError, same_grid
from .kernels import ScalarKernel, gram

__all__ = [
    "EigenBasis",
    "build_eigenbasis",
    "extend_eigenfunction",
    "extension_matrix",
    "project_data",
]

_EIG_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Rank-r eigensystem of the sampled integral operator.

    ``eigenvalues`` are on the operator scale (Gram eigenvalues divided by m
    for uniform weights), sorted in decreasing order and strictly positive.
    ``functions_on_grid`` is the (m, r) matrix of eigenfunction values whose
    columns have unit quadrature norm.  The source kernel is kept so that
    eigenfunctions can be evaluated off the grid.
    """

    grid: Grid
    eigenvalues: np.ndarray
    functions_on_grid: np.ndarray
    gram_theta: np.ndarray
    kernel: ScalarKernel = None

    @property
    def rank(self) -> int:
        return self.eigenvalues.size


def build_eigenbasis(
    ktheta: np.ndarray,
    grid: Grid,
    rank: int = None,
    kernel: ScalarKernel = None,
) -> EigenBasis:
    """Build the rank-r eigenbasis from the location Gram matrix.

    Parameters
    ----------
    ktheta : ndarray, shape (m, m)
        Symmetric PSD Gram matrix of the location kernel on the grid.
    grid : Grid
    rank : int, optional
        Number of eigenpairs to retain, ``1 <= rank <= m``.  Defaults to the
        smallest rank capturing 99.9% of the eigenvalue sum.  Requests
        beyond the numerically positive rank are truncated with a warning.
    kernel : ScalarKernel, optional
        Location kernel, required later for off-grid evaluation.
    """
    kt = np.asarray(ktheta, dtype=float)
    m = len(grid)
    if kt.shape != (m, m):
        raise ValueError(f"ktheta has shape {kt.shape}, expected ({m}, {m})")
    if np.max(np.abs(kt - kt.T), initial=0.0) > 1e-10:
        raise ValueError("ktheta must be symmetric")
    if rank is not None and not 1 <= rank <= m:
        raise ValueError(f"rank must be in [1, {m}], got {rank}")

    sqrt_w = np.sqrt(grid.weights)
    sym = (kt * sqrt_w[None, :]) * sqrt_w[:, None]
    eigvals, eigvecs = np.linalg.eigh(sym)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    positive = int(np.sum(eigvals > _EIG_FLOOR * max(eigvals[0], 0.0)))
    if positive == 0:
        raise ValueError("ktheta has no numerically positive eigenvalue")
    if rank is None:
        total = np.sum(eigvals[:positive])
        covered = np.cumsum(eigvals[:positive])
        rank = int(np.searchsorted(covered, 0.999 * total) + 1)
    elif rank > positive:
        warnings.warn(
            f"requested rank {rank} exceeds the numerically positive rank "
            f"{positive}; truncating",
            RuntimeWarning,
        )
        rank = positive
    rank = min(rank, positive)

    # unit quadrature norm: <psi_a, psi_b>_w = delta_ab
    psi = eigvecs[:, :rank] / sqrt_w[:, None]
    # deterministic sign: first non-negligible component positive
    for j in range(rank):
        col = psi[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        if idx.size and col[idx[0]] < 0:
            psi[:, j] = -col
    eigvals = eigvals[:rank].copy()
    psi.setflags(write=False)
    eigvals.setflags(write=False)
    return EigenBasis(grid, eigvals, psi, kt, kernel)


def extension_matrix(basis: EigenBasis, locations) -> np.ndarray:
    """Eigenfunction values at arbitrary locations, shape (t, rank).

    Uses ``psi_j(theta) = (1/delta_j) * sum_i w_i k(theta, theta_i) psi_j(theta_i)``,
    which reproduces the stored grid values at the grid locations.
    """
    if basis.kernel is None:
        raise ValueError("eigenbasis was built without a kernel; cannot extend")
    loc = np.atleast_1d(np.asarray(locations, dtype=float))
    knew = gram(basis.kernel, loc, basis.grid.locations)
    weighted = basis.functions_on_grid * basis.grid.weights[:, None]
    return (knew @ weighted) / basis.eigenvalues[None, :]


def extend_eigenfunction(basis: EigenBasis, j: int, theta: float) -> float:
    """Value of the j-th (0-based) eigenfunction at a single location."""
    if not 0 <= j < basis.rank:
        raise ValueError(f"eigenfunction index {j} out of range [0, {basis.rank})")
    return float(extension_matrix(basis, [theta])[0, j])


def project_data(basis: EigenBasis, ys) -> np.ndarray:
    """Inner products of observed functions with the eigenbasis, shape (n, rank)."""
    if isinstance(ys, np.ndarray):
        values = np.atleast_2d(ys)
        if values.shape[1] != len(basis.grid):
            raise GridMismatchError(
                f"data has {values.shape[1]} columns, grid has {len(basis.grid)}"
            )
    else:
        for y in ys:
            if not isinstance(y, DiscretizedFunction) or not same_grid(
                y.grid, basis.grid
            ):
                raise GridMismatchError("data functions must live on the basis grid")
        values = np.stack([y.values for y in ys])
    return (values * basis.grid.weights[None, :]) @ basis.functions_on_grid
