"""Scalar loss distributions with closed-form tails and moments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ParetoLoss:
    """Pareto (type I) loss: ``Pr[Z > t] = (scale / t)^shape`` for ``t >= scale``."""

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        if not self.shape > 0 or not self.scale > 0:
            raise DomainError("Pareto shape and scale must be positive")

    def tail(self, t: float) -> float:
        return 1.0 if t < self.scale else (self.scale / t) ** self.shape

    def moment(self, alpha: float) -> float:
        """``E[Z^alpha] = shape scale^alpha / (shape - alpha)``, finite iff alpha < shape."""
        if alpha >= self.shape:
            raise DomainError(
                f"moment of order alpha is infinite (alpha={alpha!r} >= shape={self.shape!r})")
        return self.shape * self.scale ** alpha / (self.shape - alpha)

    @property
    def mean(self) -> float:
        return self.moment(1.0)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        # numpy's pareto is the Lomax (shifted) form
        return self.scale * (1.0 + rng.pareto(self.shape, size))


@dataclass(frozen=True)
class BernoulliLoss:
    """Loss equal to ``value`` with probability ``p``, else 0."""

    p: float
    value: float = 1.0

    def tail(self, t: float) -> float:
        return self.p if t < self.value else 0.0

    def moment(self, alpha: float) -> float:
        return self.p * self.value ** alpha

    @property
    def mean(self) -> float:
        return self.p * self.value

    def sample(self, rng, size):
        return self.value * (rng.random(size) < self.p)


@dataclass(frozen=True)
class ExponentialLoss:
    rate: float = 1.0

    def tail(self, t: float) -> float:
        return math.exp(-self.rate * t) if t >= 0 else 1.0

    def moment(self, alpha: float) -> float:
        return math.gamma(alpha + 1.0) / self.rate ** alpha

    @property
    def mean(self) -> float:
        return 1.0 / self.rate

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)
