"""Orbits ``P_{n+1} = f(P_n)`` and what can be read off them.

:func:`iterate` records the distance between successive sets and the
fixed-point residual ``d(P_n, f(P_n))``; it stops once the residual drops
below ``tol``. :func:`fit_rate` checks geometric decay, and
:func:`uniqueness_check` and :func:`sandwich_run` compare several orbits.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CredalError,
    MonotonicityError,
    ParameterError,
    SandwichViolation,
    TraceError,
)
from .geometry import IntervalCredal, hausdorff_interval, set_distance
from .rules import OnBinary, UpdateRule, envelope_maps, monotonicity_probe

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000
#: relative slack for the geometric-rate inequalities
RATE_RTOL = 1e-6


@dataclass(frozen=True)
class OrbitStep:
    n: int
    set: object
    d_prev: float | None
    d_fix: float


@dataclass(frozen=True)
class OrbitTrace:
    """Record of an orbit. ``d_prev`` of step 0 is ``None``."""

    steps: tuple
    converged: bool
    iterations: int
    metric_name: str
    tol: float

    @property
    def final(self):
        return self.steps[-1].set

    @property
    def d_prev(self) -> np.ndarray:
        return np.array([s.d_prev for s in self.steps[1:]], dtype=float)

    @property
    def d_fix(self) -> np.ndarray:
        return np.array([s.d_fix for s in self.steps], dtype=float)

    def __len__(self):
        return len(self.steps)


def _default_metric(start) -> str:
    return "interval" if isinstance(start, IntervalCredal) else "tv_hausdorff"


def _adapt(rule: UpdateRule, start) -> UpdateRule:
    if rule.domain == "interval" and not isinstance(start, IntervalCredal):
        return OnBinary(rule)
    if rule.domain != "interval" and isinstance(start, IntervalCredal):
        raise ParameterError(f"rule {rule!r} acts on FGCS, start is an interval")
    return rule


def iterate(rule: UpdateRule, start, tol: float = DEFAULT_TOL,
            max_iter: int = DEFAULT_MAX_ITER, metric: str | None = None) -> OrbitTrace:
    """Apply ``rule`` from ``start`` until ``d(P_n, f(P_n)) < tol``.

    At most ``max_iter`` applications beyond the start are recorded.
    A rule error is re-raised with the failing iteration index stored in
    its ``iteration`` attribute and appended to its message.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if max_iter < 1:
        raise ParameterError("max_iter must be at least 1")
    metric = metric or _default_metric(start)
    rule = _adapt(rule, start)
    steps = []
    current, d_prev = start, None
    for n in range(max_iter + 1):
        try:
            nxt = rule.apply(current)
        except CredalError as exc:
            exc.iteration = n
            if exc.args:
                exc.args = (f"{exc.args[0]} (at iteration {n})",) + exc.args[1:]
            raise
        d_fix = set_distance(current, nxt, metric)
        steps.append(OrbitStep(n, current, d_prev, d_fix))
        if d_fix < tol:
            return OrbitTrace(tuple(steps), True, n, metric, tol)
        if n == max_iter:
            break
        current, d_prev = nxt, d_fix
    return OrbitTrace(tuple(steps), False, max_iter, metric, tol)


@dataclass(frozen=True)
class RateFit:
    """Geometric-rate diagnostics of an orbit.

    ``reference`` says which sequence played the role of ``d_n``:
    ``"successive"`` (distances between consecutive iterates),
    ``"fixed_point"`` (distances to a known fixed point) or
    ``"final_iterate"`` (distances to the last recorded set).
    ``bound_satisfied`` is the cumulative check ``d_n <= tau^n d_0``.
    """

    rho_hat: float
    r_squared: float
    tau_bound: float
    bound_satisfied: bool
    per_step_satisfied: bool
    per_step_violations: int
    cumulative_violations: int
    reference: str
    distances: tuple = field(repr=False)


def fit_rate(trace: OrbitTrace, tau_bound: float, fixed_point=None,
             reference: str = "successive") -> RateFit:
    """Fit ``log d_n`` linearly in ``n`` and check ``tau_bound`` against it."""
    if fixed_point is not None:
        reference = "fixed_point"
        d = [set_distance(s.set, fixed_point, trace.metric_name) for s in trace.steps]
    elif reference == "final_iterate":
        d = [set_distance(s.set, trace.final, trace.metric_name) for s in trace.steps[:-1]]
    elif reference == "successive":
        d = list(trace.d_prev)
    else:
        raise ParameterError(f"unknown reference {reference!r}")
    d = np.asarray(d, dtype=float)
    n = np.arange(d.size)
    pos = d > 0
    if np.count_nonzero(pos) < 3:
        raise TraceError(f"need at least 3 positive distances, got {int(np.count_nonzero(pos))}")

    slope, intercept = np.polyfit(n[pos], np.log(d[pos]), 1)
    resid = np.log(d[pos]) - (slope * n[pos] + intercept)
    ss_tot = float(((np.log(d[pos]) - np.log(d[pos]).mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0

    per_step = int(np.count_nonzero(d[1:] > tau_bound * d[:-1] * (1 + RATE_RTOL)))
    cumulative = int(np.count_nonzero(d > tau_bound ** n * d[0] * (1 + RATE_RTOL)))
    return RateFit(
        rho_hat=float(np.exp(slope)),
        r_squared=r2,
        tau_bound=float(tau_bound),
        bound_satisfied=cumulative == 0,
        per_step_satisfied=per_step == 0,
        per_step_violations=per_step,
        cumulative_violations=cumulative,
        reference=reference,
        distances=tuple(d.tolist()),
    )


@dataclass(frozen=True)
class UniquenessReport:
    traces: tuple
    converged: tuple
    pairwise: np.ndarray = field(repr=False)
    threshold: float
    passed: bool

    @property
    def limits(self) -> tuple:
        return tuple(t.final for t in self.traces)

    @property
    def max_pairwise(self) -> float:
        return float(self.pairwise.max())


def uniqueness_check(rule: UpdateRule, starts, tol: float = DEFAULT_TOL,
                     max_iter: int = DEFAULT_MAX_ITER, metric: str | None = None) -> UniquenessReport:
    """Iterate from every start and compare the limits.

    Passes iff every orbit converges and all pairwise limit distances are
    below ``10 * tol``.
    """
    starts = list(starts)
    if len(starts) < 2:
        raise ParameterError("uniqueness_check needs at least 2 starting sets")
    metric = metric or _default_metric(starts[0])
    traces = tuple(iterate(rule, s, tol, max_iter, metric) for s in starts)
    k = len(traces)
    D = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            D[i, j] = D[j, i] = set_distance(traces[i].final, traces[j].final, metric)
    converged = tuple(t.converged for t in traces)
    threshold = 10 * tol
    return UniquenessReport(traces, converged, D, threshold,
                            bool(all(converged) and D.max() < threshold))


@dataclass(frozen=True)
class SandwichStep:
    n: int
    lower: IntervalCredal
    composed: IntervalCredal
    upper: IntervalCredal


@dataclass(frozen=True)
class SandwichReport:
    """Three lockstep orbits: lower envelope, scheduled composition, upper.

    The inclusion ``lower ⊆ composed ⊆ upper`` was verified at every
    recorded step (a failure raises instead of returning).
    """

    steps: tuple
    converged: dict
    chain_holds: bool

    @property
    def lower_limit(self) -> IntervalCredal:
        return self.steps[-1].lower

    @property
    def composed_limit(self) -> IntervalCredal:
        return self.steps[-1].composed

    @property
    def upper_limit(self) -> IntervalCredal:
        return self.steps[-1].upper


def sandwich_run(rules, schedule, start: IntervalCredal, tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER, stop_early: bool = True,
                 probe_trials: int = 200, seed: int = 0) -> SandwichReport:
    """Run lower-envelope, scheduled and upper-envelope orbits side by side.

    Step ``n`` of the scheduled orbit applies ``rules[schedule[(n-1) % len]]``.
    Every rule must first pass :func:`monotonicity_probe`. With
    ``stop_early`` the run ends once all three orbits move less than
    ``tol`` in one step; otherwise exactly ``max_iter`` steps are taken.
    """
    rules = list(rules)
    schedule = [int(i) for i in schedule]
    if not rules or not schedule:
        raise ParameterError("need at least one rule and a nonempty schedule")
    for i in schedule:
        if not 0 <= i < len(rules):
            raise ParameterError(f"schedule index {i} out of range 0..{len(rules) - 1}")
    for r in rules:
        witness = monotonicity_probe(r, trials=probe_trials, seed=seed)
        if witness is not None:
            inner, outer, fi, fo = witness
            raise MonotonicityError(
                f"{r!r} is not monotone: [{inner.lo:.6g}, {inner.hi:.6g}] ⊆ "
                f"[{outer.lo:.6g}, {outer.hi:.6g}] but images "
                f"[{fi.lo:.6g}, {fi.hi:.6g}] ⊄ [{fo.lo:.6g}, {fo.hi:.6g}]",
                rule=r, witness=witness,
            )
    lower, upper = envelope_maps(rules)
    lo_set = mid = up = start
    steps = [SandwichStep(0, start, start, start)]
    converged = {"lower": False, "composed": False, "upper": False}
    for n in range(1, max_iter + 1):
        new_lo = lower.apply(lo_set)
        new_mid = rules[schedule[(n - 1) % len(schedule)]].apply(mid)
        new_up = upper.apply(up)
        if not (new_mid.includes(new_lo) and new_up.includes(new_mid)):
            raise SandwichViolation(
                f"inclusion fails at step {n}: lower={new_lo}, composed={new_mid}, upper={new_up}",
                step=n,
            )
        converged = {
            "lower": hausdorff_interval(lo_set, new_lo) < tol,
            "composed": hausdorff_interval(mid, new_mid) < tol,
            "upper": hausdorff_interval(up, new_up) < tol,
        }
        lo_set, mid, up = new_lo, new_mid, new_up
        steps.append(SandwichStep(n, lo_set, mid, up))
        if stop_early and all(converged.values()):
            break
    chain = mid.includes(lo_set) and up.includes(mid)
    return SandwichReport(tuple(steps), converged, bool(chain))
