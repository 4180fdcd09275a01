"""Loss specifications for functional output regression.

Three loss families on the output space Y = L2 of a probability measure:

* square loss            ``0.5 * ||f||_Y^2``
* Huber family           quadratic for small residuals, p-norm linear for
  large ones; parameters ``(kappa, p)`` with ``p in {1, 2}``
* eps-insensitive family zero inside the p-ball of radius ``epsilon``,
  shifted-quadratic outside; parameters ``(epsilon, p)`` with
  ``p in {2, inf}``

The supported ``p`` values are the ones whose dual-ball projections and
proximal maps have closed forms; other exponents would need an iterative
projection inside the solver loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "SquareLoss",
    "HuberLoss",
    "EpsInsensitiveLoss",
    "LossSpec",
    "conjugate_exponent",
]


def conjugate_exponent(p: float) -> float:
    """Return q such that 1/p + 1/q = 1 (with the 1/inf = 0 convention)."""
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class SquareLoss:
    """Plain squared Y-norm loss, ``0.5 * ||f||_Y^2``."""


@dataclass(frozen=True)
class HuberLoss:
    """Huber loss with threshold ``kappa`` and norm exponent ``p``.

    ``p = 2`` penalizes large residuals through their L2 norm (robust to
    globally corrupted functions), ``p = 1`` through their L1 norm (robust
    to pointwise corruption).
    """

    kappa: float
    p: float = 2.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.p not in (1, 2):
            raise ValueError(f"Huber loss supports p in {{1, 2}}, got {self.p}")
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "p", float(self.p))


@dataclass(frozen=True)
class EpsInsensitiveLoss:
    """eps-insensitive squared loss with margin ``epsilon`` and exponent ``p``.

    Residuals with p-norm below ``epsilon`` do not contribute; the dual
    problem gains a ``q``-norm penalty (q conjugate to p) that induces
    sparsity of the dual coefficients: row-wise for ``p = 2``, entrywise
    for ``p = inf``.
    """

    epsilon: float
    p: float = 2.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.p == 2 or math.isinf(self.p)):
            raise ValueError(
                f"eps-insensitive loss supports p in {{2, inf}}, got {self.p}"
            )
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "p", float(self.p))


LossSpec = Union[SquareLoss, HuberLoss, EpsInsensitiveLoss]
