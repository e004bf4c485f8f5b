"""Contraction coefficients and Monte Carlo checks of contraction claims.

:func:`birkhoff_tau` is the coefficient ``tanh(log(beta / alpha) / 4)``
attached to a likelihood with bounds ``alpha <= ell <= beta``. The
``verify_*`` functions test the inequality
``d(T p, T q) <= tau * d(p, q)`` under the Hilbert projective metric on
random inputs and count violations. :func:`estimate_psi` gives a sampled
(hence lower) estimate of the modulus
``psi(t) = sup { d(f P, f Q) : d(P, Q) <= t }`` of an update rule.

Note that the Bayes tilt ``p -> ell * p / <ell, p>`` is a diagonal
positive map: it leaves every ratio ``p_i / q_i`` unchanged up to a common
factor, so it preserves the Hilbert distance exactly. The checks below
therefore report violations for every non-degenerate pair; they measure
the claim, they do not assume it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, SamplingError
from .geometry import FGCS, IntervalCredal, set_distance
from .rules import OnBinary, UpdateRule, _perturb_fgcs, _perturb_interval
from .simplex import Likelihood, sample_positive

#: absolute slack in ``d_after <= tau * d_before + VIOLATION_SLACK``
VIOLATION_SLACK = 1e-10


def birkhoff_tau(alpha: float, beta: float) -> float:
    """``tanh(log(beta / alpha) / 4)``, in ``[0, 1)`` for finite bounds."""
    alpha, beta = float(alpha), float(beta)
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha!r}")
    if not (beta >= alpha and math.isfinite(beta)):
        raise ParameterError(f"need alpha <= beta < inf, got alpha={alpha!r}, beta={beta!r}")
    return math.tanh(0.25 * math.log(beta / alpha))


@dataclass(frozen=True)
class ContractionReport:
    """Outcome of a Monte Carlo contraction check.

    A trial violates the bound when
    ``d_after > tau_bound * d_before + 1e-10``. ``worst_case`` holds the
    input pair with the largest observed ratio ``d_after / d_before``.
    """

    tau_bound: float
    max_observed_ratio: float
    trials: int
    violations: int
    worst_case: tuple = field(repr=False)
    min_observed_ratio: float = float("nan")

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def todict(self) -> dict:
        return {
            "tau_bound": self.tau_bound,
            "max_observed_ratio": self.max_observed_ratio,
            "min_observed_ratio": self.min_observed_ratio,
            "trials": self.trials,
            "violations": self.violations,
            "worst_case": [np.asarray(x).tolist() for x in self.worst_case],
        }


def _row_hilbert(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    r = np.log(P) - np.log(Q)
    return r.max(axis=-1) - r.min(axis=-1)


def _tilt_rows(P: np.ndarray, ell: np.ndarray) -> np.ndarray:
    raw = P * ell
    return raw / raw.sum(axis=-1, keepdims=True)


def _ratios(before: np.ndarray, after: np.ndarray) -> np.ndarray:
    out = np.zeros_like(before)
    nz = before > 0
    out[nz] = after[nz] / before[nz]
    return out


def verify_point_contraction(ell, trials: int, seed: int = 0) -> ContractionReport:
    """Check ``d(T p, T q) <= tau * d(p, q)`` on random positive pairs."""
    if trials < 1:
        raise ParameterError("trials must be at least 1")
    ell = ell if isinstance(ell, Likelihood) else Likelihood(ell)
    tau = birkhoff_tau(ell.alpha, ell.beta)
    rng = np.random.default_rng(seed)
    P = sample_positive(rng, ell.dim, size=trials)
    Q = sample_positive(rng, ell.dim, size=trials)
    before = _row_hilbert(P, Q)
    after = _row_hilbert(_tilt_rows(P, ell.values), _tilt_rows(Q, ell.values))
    ratios = _ratios(before, after)
    worst = int(np.argmax(ratios))
    return ContractionReport(
        tau_bound=tau,
        max_observed_ratio=float(ratios.max()),
        min_observed_ratio=float(ratios.min()),
        trials=trials,
        violations=int(np.count_nonzero(after > tau * before + VIOLATION_SLACK)),
        worst_case=(P[worst], Q[worst]),
    )


def _set_hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    r = np.log(A)[:, None, :] - np.log(B)[None, :, :]
    D = r.max(axis=-1) - r.min(axis=-1)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def verify_set_contraction(likelihoods, trials: int, seed: int = 0,
                           max_set_size: int = 3) -> ContractionReport:
    """Check the set-level bound for ``Phi(A) = union_k T_k[A]``.

    Finite point sets ``A`` and ``B`` of random sizes ``1..max_set_size``
    are compared under the Hausdorff extension of the Hilbert metric,
    before and after ``Phi``, against ``tau = max_k tau_k``.
    """
    if trials < 1:
        raise ParameterError("trials must be at least 1")
    lik = [ell if isinstance(ell, Likelihood) else Likelihood(ell) for ell in likelihoods]
    if not lik:
        raise ParameterError("need at least one likelihood")
    dim = lik[0].dim
    tau = max(birkhoff_tau(ell.alpha, ell.beta) for ell in lik)
    rng = np.random.default_rng(seed)
    before = np.empty(trials)
    after = np.empty(trials)
    pairs = []
    for t in range(trials):
        a, b = rng.integers(1, max_set_size + 1, size=2)
        A = sample_positive(rng, dim, size=int(a))
        B = sample_positive(rng, dim, size=int(b))
        before[t] = _set_hausdorff(A, B)
        after[t] = _set_hausdorff(
            np.vstack([_tilt_rows(A, ell.values) for ell in lik]),
            np.vstack([_tilt_rows(B, ell.values) for ell in lik]),
        )
        pairs.append((A, B))
    ratios = _ratios(before, after)
    worst = int(np.argmax(ratios))
    return ContractionReport(
        tau_bound=tau,
        max_observed_ratio=float(ratios.max()),
        min_observed_ratio=float(ratios.min()),
        trials=trials,
        violations=int(np.count_nonzero(after > tau * before + VIOLATION_SLACK)),
        worst_case=pairs[worst],
    )


@dataclass(frozen=True)
class PsiEstimate:
    """Sampled modulus of an update rule on a grid of distances.

    ``psi_hat[j]`` is the largest output distance seen among accepted
    pairs with input distance at most ``t_grid[j]``. Bins are cumulative,
    so ``psi_hat`` is nondecreasing. Sampling can only miss the supremum,
    so this is a LOWER estimate of the true modulus: ``psi_hat >= t``
    refutes ``psi(t) < t`` while ``psi_hat < t`` merely supports it.
    """

    t_grid: tuple
    psi_hat: tuple
    pairs_per_bin: int
    metric: str
    max_in: tuple = ()

    @property
    def ratios(self) -> tuple:
        return tuple(p / t for p, t in zip(self.psi_hat, self.t_grid))

    @property
    def below_diagonal(self) -> tuple:
        return tuple(p < t for p, t in zip(self.psi_hat, self.t_grid))

    @property
    def all_below(self) -> bool:
        return all(self.below_diagonal)

    def todict(self) -> dict:
        return {
            "t_grid": list(self.t_grid),
            "psi_hat": list(self.psi_hat),
            "ratios": list(self.ratios),
            "below_diagonal": list(self.below_diagonal),
            "all_below": self.all_below,
            "pairs_per_bin": self.pairs_per_bin,
            "metric": self.metric,
            "estimate": "lower",
        }


def _perturb_hilbert(rng, base: FGCS, t: float) -> FGCS:
    m, d = base.matrix.shape
    noise = rng.uniform(-0.5 * t, 0.5 * t, size=(m, d))
    raw = base.matrix * np.exp(noise)
    return FGCS(list(raw / raw.sum(axis=1, keepdims=True)))


def estimate_psi(rule: UpdateRule, sampler, t_grid, pairs_per_bin: int, seed: int = 0,
                 metric: str = "tv_hausdorff", retry_factor: int = 20) -> PsiEstimate:
    """Estimate ``psi(t)`` for ``rule`` by rejection sampling.

    ``sampler(rng)`` returns a base credal set (an :class:`FGCS` or an
    :class:`IntervalCredal`). For each bin ``t`` a partner set is drawn by
    perturbing the base at scale ``t`` and kept only if its distance to the
    base under ``metric`` is at most ``t``. Raises :class:`SamplingError`
    when fewer than ``pairs_per_bin`` pairs are accepted within
    ``retry_factor * pairs_per_bin`` attempts.
    """
    t_grid = [float(t) for t in t_grid]
    if not t_grid or any(t <= 0 for t in t_grid) or any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ParameterError("t_grid must be a nonempty increasing list of positive reals")
    if pairs_per_bin < 1:
        raise ParameterError("pairs_per_bin must be at least 1")
    rng = np.random.default_rng(seed)
    accepted = []  # (d_in, d_out)
    for j, t in enumerate(t_grid):
        got = 0
        for _ in range(retry_factor * pairs_per_bin):
            if got == pairs_per_bin:
                break
            base = sampler(rng)
            if isinstance(base, IntervalCredal):
                if metric != "interval":
                    raise ParameterError("interval samplers need metric='interval'")
                other = _perturb_interval(rng, base, t * rng.random())
                f = rule
            else:
                if metric == "finite_hilbert":
                    other = _perturb_hilbert(rng, base, t * rng.random())
                else:
                    other = _perturb_fgcs(rng, base, t)
                f = OnBinary(rule) if rule.domain == "interval" else rule
            d_in = set_distance(base, other, metric)
            if d_in > t:
                continue
            d_out = set_distance(f.apply(base), f.apply(other), metric)
            accepted.append((d_in, d_out))
            got += 1
        if got < pairs_per_bin:
            raise SamplingError(
                f"bin {j} (t={t!r}): accepted {got} of {pairs_per_bin} pairs "
                f"after {retry_factor * pairs_per_bin} attempts",
                bin_index=j, t=t,
            )
    acc = np.array(accepted)
    psi_hat, max_in = [], []
    for t in t_grid:
        sel = acc[acc[:, 0] <= t]
        psi_hat.append(float(sel[:, 1].max()))
        max_in.append(float(sel[:, 0].max()))
    return PsiEstimate(tuple(t_grid), tuple(psi_hat), pairs_per_bin, metric, tuple(max_in))
