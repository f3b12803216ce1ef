"""Scalar input distributions used for uncertainty propagation.

Positive-quantity draws are truncated at zero by resampling within the same
substream, so a draw never silently clips to the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

_MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class Fixed:
    value: float

    @property
    def nominal(self) -> float:
        return self.value

    def sample(self, rng: np.random.Generator) -> float:
        return self.value


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidInputError(f"uniform distribution needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def nominal(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def sample(self, rng: np.random.Generator) -> float:
        return self.lo + rng.random() * (self.hi - self.lo)


@dataclass(frozen=True)
class Normal:
    mean: float
    std: float

    def __post_init__(self):
        if self.std < 0.0:
            raise InvalidInputError(f"normal distribution needs std >= 0, got {self.std}")

    @property
    def nominal(self) -> float:
        return self.mean

    def sample(self, rng: np.random.Generator) -> float:
        return self.mean + self.std * rng.standard_normal()


Distribution = Fixed | Uniform | Normal


def sample_positive(dist: Distribution, rng: np.random.Generator) -> float:
    """Draw from ``dist``, resampling until the value is strictly positive."""
    for _ in range(_MAX_RESAMPLES):
        value = dist.sample(rng)
        if value > 0.0:
            return value
    raise InvalidInputError(
        f"distribution {dist} produced no positive draw in {_MAX_RESAMPLES} attempts"
    )
