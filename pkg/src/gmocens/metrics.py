"""Discrepancies between joint survival surfaces and simulation summaries."""
from dataclasses import dataclass

import numpy as np

__all__ = ["GridSpec", "ise", "kl", "bias_mse", "KL_CLAMP"]

KL_CLAMP = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Square [lower, upper]^2 split into ``points`` x ``points`` cells."""

    lower: float
    upper: float
    points: int = 100

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("grid needs lower < upper")
        if self.points < 16:
            raise ValueError("grid needs at least 16 points per axis")

    @classmethod
    def from_sample(cls, sample, points=100):
        """Grid on [min Y, max Y]."""
        return cls(float(sample.y[0]), float(sample.y[-1]), points)

    @property
    def step(self):
        return (self.upper - self.lower) / self.points

    def midpoints(self):
        return self.lower + self.step * (np.arange(self.points) + 0.5)

    def mesh(self):
        x = self.midpoints()
        return np.meshgrid(x, x, indexing="ij")

    def evaluate(self, f):
        t, s = self.mesh()
        return np.broadcast_to(np.asarray(f(t, s), dtype=float), t.shape)


def ise(f, g, grid):
    """Midpoint rule for the integral of (f - g)^2 over the grid square."""
    d = grid.evaluate(f) - grid.evaluate(g)
    return float(np.sum(d * d) * grid.step**2)


def kl(f, g, grid):
    """Midpoint rule for the integral of f log(f / g).

    Both surfaces are clamped below at 1e-12 and cells where f is under the
    clamp contribute 0. The integrand is not a density ratio, so the result
    can be negative.
    """
    fv = grid.evaluate(f)
    gv = grid.evaluate(g)
    fc = np.maximum(fv, KL_CLAMP)
    gc = np.maximum(gv, KL_CLAMP)
    cell = np.where(fv >= KL_CLAMP, fc * np.log(fc / gc), 0.0)
    return float(np.sum(cell) * grid.step**2)


def bias_mse(estimates, truth):
    """(mean - truth, mean squared deviation from truth)."""
    x = np.asarray(estimates, dtype=float)
    if x.size == 0:
        raise ValueError("need at least one estimate")
    return float(np.mean(x) - truth), float(np.mean((x - truth) ** 2))
