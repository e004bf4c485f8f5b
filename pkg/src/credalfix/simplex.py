"""Probability vectors on a finite outcome space and their ground metrics.

Everything here works on the probability simplex over ``{0, ..., dim-1}``
with counting measure as the dominating measure, so densities and
probability weights coincide.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, NormalizationError, PositivityError

#: accepted deviation of raw input weights from unit mass
SUM_TOLERANCE = 1e-6
#: floor used when a positive distribution is built without an explicit one
DEFAULT_FLOOR = 1e-9
#: floor used by the Monte Carlo samplers
SAMPLER_FLOOR = 1e-6

__all__ = [
    "Dist",
    "PositiveDist",
    "Likelihood",
    "as_weights",
    "tv_distance",
    "hilbert_distance",
    "pairwise_hilbert",
    "bayes_tilt",
    "support_value",
    "sample_positive",
]


def as_weights(x) -> np.ndarray:
    """Return the weight vector of a :class:`Dist` or an array-like."""
    if isinstance(x, Dist):
        return x.weights
    return np.asarray(x, dtype=float)


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")


class Dist:
    """A probability vector over a finite outcome space.

    Weights are copied, checked for nonnegativity and renormalized so that
    they sum to one. Inputs whose mass is off by more than ``1e-6`` are
    rejected instead of being silently fixed.
    """

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = np.array(as_weights(weights), dtype=float)
        if w.ndim != 1:
            raise DimensionError(f"weights must be a vector, got shape {w.shape}")
        if w.size < 2:
            raise DimensionError(f"outcome space needs at least 2 points, got {w.size}")
        if not np.all(np.isfinite(w)):
            raise NormalizationError("weights must be finite")
        if np.any(w < 0):
            i = int(np.argmin(w))
            raise NormalizationError(f"weight {i} is negative ({float(w[i])!r})")
        total = w.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise NormalizationError(f"weights sum to {float(total)!r}, expected 1")
        w /= total
        w.flags.writeable = False
        self._w = w

    @property
    def weights(self) -> np.ndarray:
        return self._w

    @property
    def dim(self) -> int:
        return self._w.size

    def __len__(self):
        return self._w.size

    def __array__(self, dtype=None, copy=None):
        return self._w if dtype is None else self._w.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Dist):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._w, other._w))

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self):
        body = ", ".join(f"{v:.6g}" for v in self._w)
        return f"{type(self).__name__}([{body}])"

    def tolist(self) -> list:
        return self._w.tolist()

    def is_positive(self) -> bool:
        return bool(np.all(self._w > 0))


class PositiveDist(Dist):
    """A distribution whose every weight is at least ``floor > 0``."""

    __slots__ = ("floor",)

    def __init__(self, weights, floor: float | None = None):
        super().__init__(weights)
        if floor is None:
            floor = DEFAULT_FLOOR
        if not floor > 0:
            raise PositivityError(f"floor must be positive, got {floor!r}")
        low = self._w.min()
        # analytic floors (e.g. after a tilt) can be off by an ulp
        if low < floor * (1.0 - 1e-12):
            raise PositivityError(
                f"weight {int(np.argmin(self._w))} = {float(low)!r} is below floor {floor!r}"
            )
        self.floor = float(floor)

    @classmethod
    def from_dist(cls, p, floor: float | None = None) -> "PositiveDist":
        """Promote ``p`` to a positive distribution.

        Without an explicit floor the default ``1e-9`` is used, lowered to
        the smallest weight when that is already positive but smaller.
        """
        if isinstance(p, PositiveDist) and floor is None:
            return p
        w = as_weights(p)
        if floor is None:
            low = float(np.min(w))
            if not low > 0:
                raise PositivityError("distribution has a zero weight")
            floor = min(DEFAULT_FLOOR, low)
        return cls(w, floor=floor)


class Likelihood:
    """Strictly positive evidence weights ``ell(E | theta_i)``.

    ``alpha`` and ``beta`` are the tight bounds ``min`` and ``max`` of the
    values and are always recomputed from them.
    """

    __slots__ = ("_v", "alpha", "beta")

    def __init__(self, values):
        v = np.array(values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise DimensionError(f"likelihood must be a vector of length >= 2, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise PositivityError("likelihood values must be finite")
        if not np.all(v > 0):
            i = int(np.argmin(v))
            raise PositivityError(f"likelihood value {i} is not positive ({v[i]!r})")
        v.flags.writeable = False
        self._v = v
        self.alpha = float(v.min())
        self.beta = float(v.max())

    @property
    def values(self) -> np.ndarray:
        return self._v

    @property
    def dim(self) -> int:
        return self._v.size

    @property
    def ratio(self) -> float:
        return self.beta / self.alpha

    def scaled(self, c: float) -> "Likelihood":
        return Likelihood(self._v * c)

    def __len__(self):
        return self._v.size

    def __eq__(self, other):
        if not isinstance(other, Likelihood):
            return NotImplemented
        return bool(np.array_equal(self._v, other._v))

    def __hash__(self):
        return hash(self._v.tobytes())

    def __repr__(self):
        return f"Likelihood({self._v.tolist()})"

    def tolist(self) -> list:
        return self._v.tolist()


def tv_distance(p, q) -> float:
    """Total variation distance ``0.5 * sum |p_i - q_i|``."""
    a, b = as_weights(p), as_weights(q)
    _check_same_dim(a, b)
    return 0.5 * float(np.abs(a - b).sum())


def hilbert_distance(p, q) -> float:
    """Hilbert projective distance ``log max(p/q) - log min(p/q)``.

    Positive scaling of either argument leaves the value unchanged, so raw
    (unnormalized) positive vectors are accepted as well.
    """
    a, b = as_weights(p), as_weights(q)
    _check_same_dim(a, b)
    if not (np.all(a > 0) and np.all(b > 0)):
        raise PositivityError("Hilbert distance needs strictly positive vectors")
    r = np.log(a) - np.log(b)
    return float(r.max() - r.min())


def pairwise_hilbert(ps, qs) -> np.ndarray:
    """Matrix of Hilbert distances between the rows of ``ps`` and ``qs``."""
    a = np.atleast_2d(np.asarray([as_weights(p) for p in ps], dtype=float))
    b = np.atleast_2d(np.asarray([as_weights(q) for q in qs], dtype=float))
    _check_same_dim(a, b)
    if not (np.all(a > 0) and np.all(b > 0)):
        raise PositivityError("Hilbert distance needs strictly positive vectors")
    r = np.log(a)[:, None, :] - np.log(b)[None, :, :]
    return r.max(axis=-1) - r.min(axis=-1)


def bayes_tilt(p, ell: Likelihood) -> PositiveDist:
    """Bayes update of ``p`` by ``ell``: ``ell_i p_i / sum_j ell_j p_j``.

    The result carries the floor ``alpha * floor(p) / beta``.
    """
    p = PositiveDist.from_dist(p)
    if not isinstance(ell, Likelihood):
        ell = Likelihood(ell)
    if ell.dim != p.dim:
        raise DimensionError(f"likelihood has dim {ell.dim}, distribution has dim {p.dim}")
    raw = ell.values * p.weights
    return PositiveDist(raw / raw.sum(), floor=ell.alpha * p.floor / ell.beta)


def support_value(p, direction) -> float:
    """Expectation of ``direction`` under ``p``."""
    a, d = as_weights(p), np.asarray(direction, dtype=float)
    _check_same_dim(a, d)
    return float(a @ d)


def sample_positive(rng: np.random.Generator, dim: int, size: int | None = None,
                    floor: float = SAMPLER_FLOOR) -> np.ndarray:
    """Symmetric Dirichlet(1) draws clamped at ``floor`` and renormalized.

    Returns raw arrays (shape ``(dim,)`` or ``(size, dim)``) so Monte Carlo
    loops avoid per-sample object construction.
    """
    shape = (dim,) if size is None else (size, dim)
    w = rng.dirichlet(np.ones(dim), size=size).reshape(shape)
    w = np.maximum(w, floor)
    return w / w.sum(axis=-1, keepdims=True)
