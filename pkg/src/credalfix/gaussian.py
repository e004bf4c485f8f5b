"""Conjugate normal updates of a credal set with Gaussian extremes.

Data ``X_1..X_n ~ N(theta_star, 1)``; each extreme prior
``N(mu_j, tau2_j)`` on the mean is updated in closed form::

    tau2' = 1 / (1 / tau2 + n)
    mu'   = tau2' * (mu / tau2 + sum(X))

Re-applying the update with the same batch drives every extreme to the
same point, so the credal set collapses onto its fixed point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .simplex import PositiveDist

DEFAULT_N = 20
DEFAULT_ROUNDS = 50
DEFAULT_MU = (2.0, 3.0, -2.0)
DEFAULT_TAU2 = (1.0, 2.0, 2.0)


@dataclass(frozen=True)
class GaussianParam:
    mu: float
    tau2: float

    def __post_init__(self):
        if not self.tau2 > 0:
            raise ParameterError(f"tau2 must be positive, got {self.tau2!r}")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "tau2", float(self.tau2))

    def astuple(self) -> tuple:
        return (self.mu, self.tau2)


@dataclass(frozen=True)
class GaussianFGCS:
    params: tuple
    round: int = 0

    def __post_init__(self):
        params = tuple(p if isinstance(p, GaussianParam) else GaussianParam(*p) for p in self.params)
        if not params:
            raise ParameterError("a Gaussian credal set needs at least one extreme")
        object.__setattr__(self, "params", params)

    @classmethod
    def from_lists(cls, mu, tau2) -> "GaussianFGCS":
        if len(mu) != len(tau2):
            raise ParameterError(f"{len(mu)} means but {len(tau2)} variances")
        return cls(tuple(GaussianParam(m, t) for m, t in zip(mu, tau2)))

    @classmethod
    def default(cls) -> "GaussianFGCS":
        return cls.from_lists(DEFAULT_MU, DEFAULT_TAU2)

    def as_array(self) -> np.ndarray:
        """Rows ``(mu_j, tau2_j)``."""
        return np.array([p.astuple() for p in self.params])


@dataclass(frozen=True)
class DataBatch:
    """Sufficient statistics of a normal sample; regenerable from ``seed``."""

    n: int
    sum_x: float
    seed: int | None = None
    theta_star: float = 0.0

    def __post_init__(self):
        if int(self.n) < 1:
            raise ParameterError(f"sample size must be at least 1, got {self.n!r}")

    @classmethod
    def generate(cls, n: int = DEFAULT_N, seed: int = 0, theta_star: float = 0.0) -> "DataBatch":
        x = theta_star + np.random.default_rng(seed).standard_normal(int(n))
        return cls(int(n), float(x.sum()), seed, float(theta_star))

    @property
    def mean(self) -> float:
        return self.sum_x / self.n


def conjugate_update(p: GaussianParam, batch: DataBatch) -> GaussianParam:
    tau2 = 1.0 / (1.0 / p.tau2 + batch.n)
    return GaussianParam(tau2 * (p.mu / p.tau2 + batch.sum_x), tau2)


@dataclass(frozen=True)
class IllustrationTrace:
    """Per-round parameters and averaged squared parameter differences.

    ``params[t]`` has shape ``(J, 2)`` with rows ``(mu_j, tau2_j)`` after
    round ``t`` (``t = 0`` is the prior). ``avg_sq_diff[t - 1]`` is
    ``mean_j ||xi_t^(j) - xi_{t-1}^(j)||^2`` for ``t = 1..rounds``.
    """

    params: np.ndarray
    avg_sq_diff: np.ndarray
    batches: tuple
    fresh_batches: bool

    @property
    def rounds(self) -> int:
        return self.avg_sq_diff.size


def run_illustration(init: GaussianFGCS, batch: DataBatch, rounds: int = DEFAULT_ROUNDS,
                     fresh_batches: bool = False) -> IllustrationTrace:
    """Apply the conjugate update ``rounds`` times to every extreme.

    By default the same batch is reused every round. ``fresh_batches=True``
    draws a new batch per round (seed ``batch.seed + t``); that variant is
    an extension, not the fixed-evidence setting.
    """
    if rounds < 1:
        raise ParameterError("rounds must be at least 1")
    current = list(init.params)
    history = [init.as_array()]
    batches = [batch]
    for t in range(1, rounds + 1):
        if fresh_batches and t > 1:
            seed = None if batch.seed is None else batch.seed + t - 1
            batches.append(DataBatch.generate(batch.n, seed, batch.theta_star))
        b = batches[-1]
        current = [conjugate_update(p, b) for p in current]
        history.append(np.array([p.astuple() for p in current]))
    params = np.stack(history)
    diffs = ((params[1:] - params[:-1]) ** 2).sum(axis=2).mean(axis=1)
    return IllustrationTrace(params, diffs, tuple(batches), fresh_batches)


def discretize(p: GaussianParam, grid, floor: float = 1e-12) -> PositiveDist:
    """Normal density of ``p`` on ``grid``, clamped at ``floor``, renormalized."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or not np.all(np.diff(g) > 0):
        raise ParameterError("grid must be strictly increasing with at least 2 points")
    if not floor > 0:
        raise ParameterError("floor must be positive")
    # log-space keeps tiny variances from underflowing to all zeros
    logd = -0.5 * (g - p.mu) ** 2 / p.tau2
    w = np.exp(logd - logd.max())
    w /= w.sum()
    w = np.maximum(w, floor)
    w /= w.sum()
    return PositiveDist(w, floor=float(w.min()))
