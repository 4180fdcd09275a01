"""Discretized L2[Theta, mu] primitives.

Functions on a compact real domain are represented by their values at a
finite set of sampling locations together with quadrature weights.  With
uniform weights 1/m the quadrature is the Monte-Carlo approximation of
integrals against the probability measure mu; non-uniform positive weights
are accepted so unevenly informative samplings can be handled.

This module provides the weighted norms and inner products, the tractable
ball projections (q in {2, inf}), the proximal maps of scaled q-norms
(q in {1, 2}) and the evaluation of the supported loss functions on
residual functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .losses import (
    EpsInsensitiveLoss,
    HuberLoss,
    LossSpec,
    SquareLoss,
    conjugate_exponent,
)

__all__ = [
    "Grid",
    "DiscretizedFunction",
    "GridMismatchError",
    "same_grid",
    "mc_norm",
    "mc_inner",
    "project_qball",
    "prox_qnorm",
    "eval_loss",
]

_WEIGHT_SUM_TOL = 1e-12


class GridMismatchError(ValueError):
    """Raised when an operation mixes functions living on different grids."""


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Grid:
    """Sampling locations in Theta with quadrature weights summing to one.

    Parameters
    ----------
    locations : array-like, shape (m,)
        Strictly increasing sampling locations.
    weights : array-like, shape (m,), optional
        Positive quadrature weights summing to 1.  Defaults to the uniform
        weights 1/m (Monte-Carlo convention for i.i.d. locations).
    """

    locations: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        loc = _readonly(np.atleast_1d(self.locations))
        if loc.ndim != 1 or loc.size < 1:
            raise ValueError("grid locations must be a non-empty 1-d array")
        if loc.size > 1 and not np.all(np.diff(loc) > 0):
            raise ValueError("grid locations must be strictly increasing")
        if self.weights is None:
            w = np.full(loc.size, 1.0 / loc.size)
            w.setflags(write=False)
        else:
            w = _readonly(np.atleast_1d(self.weights))
            if w.shape != loc.shape:
                raise ValueError("weights must match locations in length")
            if not np.all(w > 0):
                raise ValueError("weights must all be positive")
            if abs(w.sum() - 1.0) > _WEIGHT_SUM_TOL:
                raise ValueError(
                    f"weights must sum to 1 within {_WEIGHT_SUM_TOL}, "
                    f"got {w.sum()!r}"
                )
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.locations.size

    @property
    def is_uniform(self) -> bool:
        return bool(np.allclose(self.weights, 1.0 / len(self), rtol=0, atol=1e-15))

    @classmethod
    def uniform(cls, start: float, stop: float, size: int) -> "Grid":
        """Equispaced midpoint grid on [start, stop] with uniform weights."""
        if size < 1:
            raise ValueError("grid size must be >= 1")
        h = (stop - start) / size
        loc = start + h * (np.arange(size) + 0.5)
        return cls(loc)


def same_grid(a: Grid, b: Grid) -> bool:
    return a is b or (
        np.array_equal(a.locations, b.locations)
        and np.array_equal(a.weights, b.weights)
    )


@dataclass(frozen=True, eq=False)
class DiscretizedFunction:
    """A real function on Theta known through its values on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = _readonly(np.atleast_1d(self.values))
        if v.shape != (len(self.grid),):
            raise ValueError(
                f"values have shape {v.shape}, expected ({len(self.grid)},)"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must all be finite")
        object.__setattr__(self, "values", v)


def _check_same_grid(f: DiscretizedFunction, g: DiscretizedFunction):
    if not same_grid(f.grid, g.grid):
        raise GridMismatchError("functions are sampled on different grids")


def mc_norm(f: DiscretizedFunction, p: float = 2.0) -> float:
    """Quadrature p-norm ``(sum_j w_j |f(theta_j)|^p)^(1/p)``.

    ``p = inf`` returns the maximum absolute value over the grid.  Any
    ``p >= 1`` is accepted for norm evaluation; projections and proximal
    maps are only available for the exponents with closed forms.
    """
    if p < 1:
        raise ValueError(f"norm exponent must satisfy p >= 1, got {p}")
    av = np.abs(f.values)
    if math.isinf(p):
        return float(av.max())
    if p == 1:
        return float(np.dot(f.grid.weights, av))
    if p == 2:
        return float(math.sqrt(np.dot(f.grid.weights, av * av)))
    return float(np.dot(f.grid.weights, av**p) ** (1.0 / p))


def mc_inner(f: DiscretizedFunction, g: DiscretizedFunction) -> float:
    """Quadrature inner product ``sum_j w_j f(theta_j) g(theta_j)``."""
    _check_same_grid(f, g)
    return float(np.dot(f.grid.weights, f.values * g.values))


def project_qball(
    f: DiscretizedFunction, q: float, radius: float
) -> DiscretizedFunction:
    """Orthogonal projection of ``f`` onto the q-norm ball of given radius.

    Closed forms exist for ``q = 2`` (radial rescaling by the quadrature
    2-norm) and ``q = inf`` (pointwise clamping to [-radius, radius]).
    """
    if not radius > 0:
        raise ValueError(f"ball radius must be positive, got {radius}")
    if q == 2:
        nrm = mc_norm(f, 2.0)
        if nrm <= radius:
            return f
        return DiscretizedFunction(f.grid, f.values * (radius / nrm))
    if math.isinf(q):
        return DiscretizedFunction(f.grid, np.clip(f.values, -radius, radius))
    raise ValueError(
        f"projection on the q-ball is only tractable for q in {{2, inf}}, got q={q}"
    )


def prox_qnorm(
    f: DiscretizedFunction, q: float, scale: float
) -> DiscretizedFunction:
    """Proximal map of ``scale * ||.||_q`` at ``f``, for ``q in {1, 2}``.

    ``q = 1`` is the pointwise soft threshold at level ``scale``; ``q = 2``
    shrinks the whole function by ``(1 - scale/||f||_2)+`` (block soft
    threshold).  Norms are the functional quadrature norms; any scaling
    induced by a discretized optimization metric belongs to the caller.
    """
    if not scale > 0:
        raise ValueError(f"prox scale must be positive, got {scale}")
    if q == 1:
        v = f.values
        return DiscretizedFunction(
            f.grid, np.sign(v) * np.maximum(np.abs(v) - scale, 0.0)
        )
    if q == 2:
        nrm = mc_norm(f, 2.0)
        if nrm <= scale:
            return DiscretizedFunction(f.grid, np.zeros(len(f.grid)))
        return DiscretizedFunction(f.grid, f.values * (1.0 - scale / nrm))
    raise ValueError(
        f"proximal map of the q-norm is only computable for q in {{1, 2}}, got q={q}"
    )


def eval_loss(residual: DiscretizedFunction, loss: LossSpec) -> float:
    """Evaluate a loss specification on a residual function.

    The Huber value is ``0.5 * ||P(f)||_Y^2 + kappa * ||f - P(f)||_p`` with
    ``P`` the projection on the dual-exponent ball of radius kappa;
    the eps-insensitive value is ``0.5 * ||f - P(f)||_Y^2`` with ``P``
    the projection on the p-ball of radius epsilon.
    """
    if isinstance(loss, SquareLoss):
        return 0.5 * mc_norm(residual, 2.0) ** 2
    if isinstance(loss, HuberLoss):
        q = conjugate_exponent(loss.p)
        if not (q == 2 or math.isinf(q)):
            raise ValueError(
                f"Huber loss needs a tractable dual-ball projection; "
                f"p={loss.p} (q={q}) is unsupported"
            )
        if mc_norm(residual, q) <= loss.kappa:
            # inside the dual ball the loss is exactly quadratic
            return 0.5 * mc_norm(residual, 2.0) ** 2
        proj = project_qball(residual, q, loss.kappa)
        tail = DiscretizedFunction(residual.grid, residual.values - proj.values)
        return 0.5 * mc_norm(proj, 2.0) ** 2 + loss.kappa * mc_norm(tail, loss.p)
    if isinstance(loss, EpsInsensitiveLoss):
        if not (loss.p == 2 or math.isinf(loss.p)):
            raise ValueError(
                f"eps-insensitive loss needs a tractable ball projection; "
                f"p={loss.p} is unsupported"
            )
        if mc_norm(residual, loss.p) <= loss.epsilon:
            return 0.0
        proj = project_qball(residual, loss.p, loss.epsilon)
        tail = DiscretizedFunction(residual.grid, residual.values - proj.values)
        return 0.5 * mc_norm(tail, 2.0) ** 2
    raise TypeError(f"unknown loss specification: {loss!r}")
