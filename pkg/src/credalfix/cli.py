"""Command-line front end: run one scenario file and write its artifacts.

Usage::

    credalfix <kind> --scenario FILE --out DIR [--seed N] [--max-iter N] [--tol X]
    credalfix validate FILE [FILE ...]

Each run writes ``trace.csv`` (fixed columns per kind; the gaussian kind
has one ``mu_j, tau2_j`` pair per extreme), ``report.json``
(deterministic for a given scenario and seed) and ``metadata.json``
(timestamp and environment). Exit status: 0 when every check passes,
1 when a check fails, 2 on a usage, scenario or runtime error. On status 2
any files written by the run are removed.
"""
from __future__ import annotations

import argparse
import datetime
import json
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .contraction import estimate_psi, verify_point_contraction, verify_set_contraction
from .errors import CredalError, TraceError
from .gaussian import DEFAULT_N, DEFAULT_ROUNDS, DataBatch, run_illustration
from .geometry import IntervalCredal, hausdorff_interval, random_fgcs
from .iteration import DEFAULT_MAX_ITER, DEFAULT_TOL, fit_rate, iterate, sandwich_run, uniqueness_check
from .scenario import KINDS, SCHEMA_VERSION, Scenario, load_scenario
from .traces import dumps, orbit_columns, orbit_rows, orbit_to_dict, to_csv

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
OUTPUT_FILES = ("trace.csv", "report.json", "metadata.json")

TRACE_COLUMNS = {
    "counterexample": ("n", "d_prev", "d_fix", "lo", "hi"),
    "contract": ("likelihood", "mode", "tau_bound", "trials", "violations",
                 "max_observed_ratio", "min_observed_ratio"),
    "psi": ("t", "psi_hat", "ratio", "max_in", "below_diagonal"),
    "sandwich": ("n", "lower_lo", "lower_hi", "composed_lo", "composed_hi", "upper_lo", "upper_hi"),
    "uniqueness": ("start", "n", "d_prev", "d_fix", "extreme_count"),
}


class Outcome:
    """What a runner produced: CSV rows, JSON results and named checks."""

    def __init__(self, columns, rows, results: dict, checks: dict):
        self.columns = tuple(columns)
        self.rows = rows
        self.results = results
        self.checks = {k: bool(v) for k, v in checks.items()}

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _run_iterate(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    trace = iterate(o["rule"], o["start"], p.get("tol", DEFAULT_TOL),
                    p.get("max_iter", DEFAULT_MAX_ITER), p.get("metric"))
    expect = p.get("expect_converged", True)
    checks = {"convergence": trace.converged == expect}
    results = {"orbit": orbit_to_dict(trace), "expect_converged": expect}
    if "tau_bound" in p:
        try:
            fit = fit_rate(trace, p["tau_bound"], fixed_point=o.get("fixed_point"))
        except TraceError as exc:
            results["rate"] = {"error": str(exc)}
            checks["rate_bound"] = False
        else:
            results["rate"] = {
                "rho_hat": fit.rho_hat, "r_squared": fit.r_squared, "tau_bound": fit.tau_bound,
                "bound_satisfied": fit.bound_satisfied, "per_step_satisfied": fit.per_step_satisfied,
                "cumulative_violations": fit.cumulative_violations,
                "per_step_violations": fit.per_step_violations, "reference": fit.reference,
            }
            checks["rate_bound"] = fit.bound_satisfied
    return Outcome(orbit_columns(trace), orbit_rows(trace), results, checks)


def _run_uniqueness(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    rep = uniqueness_check(o["rule"], o["starts"], p.get("tol", DEFAULT_TOL),
                           p.get("max_iter", DEFAULT_MAX_ITER), p.get("metric"))
    rows = []
    for k, t in enumerate(rep.traces):
        for s in t.steps:
            if isinstance(s.set, IntervalCredal):
                count = None
            else:
                count = len(s.set.extremes)
            rows.append((k, s.n, s.d_prev, s.d_fix, count))
    results = {
        "converged": list(rep.converged),
        "pairwise": rep.pairwise,
        "threshold": rep.threshold,
        "max_pairwise": rep.max_pairwise,
        "orbits": [orbit_to_dict(t, include_sets=False) for t in rep.traces],
    }
    checks = {"all_converged": all(rep.converged), "limits_agree": rep.max_pairwise < rep.threshold}
    return Outcome(TRACE_COLUMNS["uniqueness"], rows, results, checks)


def _run_contract(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    mode = p.get("mode", "point")
    trials = p.get("trials", 10_000)
    if mode == "point":
        reports = [verify_point_contraction(ell, trials, seed=sc.seed + k)
                   for k, ell in enumerate(o["likelihoods"])]
        labels = [str(k) for k in range(len(reports))]
    else:
        reports = [verify_set_contraction(o["likelihoods"], trials, seed=sc.seed,
                                          max_set_size=p.get("max_set_size", 3))]
        labels = ["all"]
    rows = [(lab, mode, r.tau_bound, r.trials, r.violations, r.max_observed_ratio, r.min_observed_ratio)
            for lab, r in zip(labels, reports)]
    results = {"mode": mode, "reports": [r.todict() for r in reports],
               "violations": sum(r.violations for r in reports)}
    return Outcome(TRACE_COLUMNS["contract"], rows, results,
                   {"zero_violations": results["violations"] == 0})


def _psi_sampler(spec: dict):
    if spec["type"] == "random_fgcs":
        dim, n_points = spec["dim"], spec["n_points"]
        return lambda rng: random_fgcs(rng, dim, n_points)
    lo_range, hi_range = spec["lo_range"], spec["hi_range"]

    def sample(rng):
        a = rng.uniform(*sorted(lo_range))
        b = rng.uniform(*sorted(hi_range))
        return IntervalCredal(float(min(a, b)), float(max(a, b)))

    return sample


def _run_psi(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    metric = p.get("metric", "interval" if p["sampler"]["type"] == "interval" else "tv_hausdorff")
    est = estimate_psi(o["rule"], _psi_sampler(p["sampler"]), p["t_grid"],
                       p.get("pairs_per_bin", 50), seed=sc.seed, metric=metric,
                       retry_factor=p.get("retry_factor", 20))
    rows = list(zip(est.t_grid, est.psi_hat, est.ratios, est.max_in, est.below_diagonal))
    return Outcome(TRACE_COLUMNS["psi"], rows, {"psi": est.todict()},
                   {"below_diagonal": est.all_below})


def _run_counterexample(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    rule = o["rule"]
    delta = rule.delta
    trace = iterate(rule, o["start"], p.get("tol", DEFAULT_TOL), p.get("max_iter", 1000), "interval")
    min_d_fix = float(trace.d_fix.min())
    a = p.get("witness_a", 0.3)
    if not a < 1.0 - delta:
        raise CredalError(f"params.witness_a: need witness_a < 1 - delta = {1.0 - delta!r}")
    base = IntervalCredal(a, 1.0 - delta)
    f_base = rule.apply(base)
    witness = []
    for n in p.get("witness_n", [100, 1000, 10_000]):
        hi = 1.0 - delta - 1.0 / n
        if hi < a:
            continue
        witness.append({"n": n, "jump": hausdorff_interval(rule.apply(IntervalCredal(a, hi)), f_base)})
    results = {
        "delta": delta,
        "orbit": orbit_to_dict(trace),
        "min_d_fix": min_d_fix,
        "witness_base": base,
        "witness": witness,
    }
    checks = {
        # non-convergence is the expected outcome for this kind
        "no_convergence": not trace.converged,
        "residual_bounded_below": min_d_fix >= delta / 2,
        "witness_jump": bool(witness) and all(w["jump"] >= delta - 1e-9 for w in witness),
    }
    return Outcome(TRACE_COLUMNS["counterexample"], orbit_rows(trace), results, checks)


def _run_sandwich(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    rep = sandwich_run(o["rules"], p["schedule"], o["start"], p.get("tol", DEFAULT_TOL),
                       p.get("max_iter", 100), stop_early=p.get("stop_early", False),
                       probe_trials=p.get("probe_trials", 200), seed=sc.seed)
    rows = [(s.n, s.lower.lo, s.lower.hi, s.composed.lo, s.composed.hi, s.upper.lo, s.upper.hi)
            for s in rep.steps]
    results = {
        "steps": len(rep.steps) - 1,
        "converged": rep.converged,
        "lower_limit": rep.lower_limit,
        "composed_limit": rep.composed_limit,
        "upper_limit": rep.upper_limit,
    }
    return Outcome(TRACE_COLUMNS["sandwich"], rows, results, {"chain_holds": rep.chain_holds})


def _run_gaussian(sc: Scenario) -> Outcome:
    p, o = sc.params, sc.objects
    batch = DataBatch.generate(p.get("n", DEFAULT_N), sc.seed, p.get("theta_star", 0.0))
    tr = run_illustration(o["init"], batch, p.get("rounds", DEFAULT_ROUNDS),
                          fresh_batches=p.get("fresh_batches", False))
    threshold = p.get("threshold", 1e-8)
    J = tr.params.shape[1]
    columns = ["round", "avg_sq_diff"]
    for j in range(1, J + 1):
        columns += [f"mu_{j}", f"tau2_{j}"]
    rows = []
    for t in range(tr.params.shape[0]):
        d = None if t == 0 else tr.avg_sq_diff[t - 1]
        rows.append((t, d, *tr.params[t].ravel()))
    diffs = tr.avg_sq_diff
    below = np.flatnonzero(diffs < threshold)
    results = {
        "avg_sq_diff": diffs,
        "params": tr.params,
        "batches": [{"n": b.n, "sum_x": b.sum_x, "seed": b.seed, "theta_star": b.theta_star}
                    for b in tr.batches],
        "threshold": threshold,
        "first_round_below": int(below[0]) + 1 if below.size else None,
    }
    checks = {
        "strictly_decreasing": bool(np.all(np.diff(diffs) < 0)),
        "below_threshold": below.size > 0,
    }
    return Outcome(columns, rows, results, checks)


RUNNERS = {
    "iterate": _run_iterate,
    "uniqueness": _run_uniqueness,
    "contract": _run_contract,
    "psi": _run_psi,
    "counterexample": _run_counterexample,
    "sandwich": _run_sandwich,
    "gaussian": _run_gaussian,
}


def build_report(sc: Scenario, outcome: Outcome) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": sc.kind,
        "library_version": __version__,
        "scenario": sc.raw,
        "scenario_hash": sc.hash,
        "seed": sc.seed,
        "passed": outcome.passed,
        "checks": outcome.checks,
        "results": outcome.results,
    }


def run(sc: Scenario, out_dir) -> int:
    """Run ``sc`` and write its artifacts into ``out_dir``; return the exit status."""
    out = Path(out_dir)
    try:
        outcome = RUNNERS[sc.kind](sc)
    except CredalError as exc:
        raise CredalError(f"{sc.kind} scenario {sc.hash[:12]}: {exc}") from exc
    files = {
        "trace.csv": to_csv(outcome.columns, outcome.rows, comment=f"scenario_hash={sc.hash}"),
        "report.json": dumps(build_report(sc, outcome)),
        "metadata.json": json.dumps({
            "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "argv": sys.argv,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "platform": platform.platform(),
            "library_version": __version__,
            "scenario_hash": sc.hash,
        }, sort_keys=True, indent=2) + "\n",
    }
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            path = out / name
            path.write_text(text)
            written.append(path)
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return EXIT_PASS if outcome.passed else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="credalfix", description="Run credal-set update experiments.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a scenario of kind {kind!r}")
        sp.add_argument("--scenario", required=True, help="scenario file (YAML)")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, help="override the scenario seed")
        sp.add_argument("--max-iter", type=int, dest="max_iter", help="override params.max_iter")
        sp.add_argument("--tol", type=float, help="override params.tol")
    vp = sub.add_parser("validate", help="load scenario files without running them")
    vp.add_argument("paths", nargs="+", metavar="FILE")
    return ap


def _validate(paths) -> int:
    status = EXIT_PASS
    for path in paths:
        try:
            sc = load_scenario(path)
        except CredalError as exc:
            print(f"INVALID {path}: {exc}", file=sys.stderr)
            status = EXIT_ERROR
        else:
            print(f"OK {path} kind={sc.kind} hash={sc.hash[:12]}")
    return status


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "validate":
        return _validate(args.paths)
    out = Path(args.out)
    try:
        overrides = {"seed": args.seed, "max_iter": args.max_iter, "tol": args.tol}
        sc = load_scenario(args.scenario, overrides)
        if sc.kind != args.command:
            raise CredalError(f"scenario kind is {sc.kind!r} but subcommand is {args.command!r}")
        status = run(sc, out)
    except (CredalError, OSError) as exc:
        for name in OUTPUT_FILES:
            (out / name).unlink(missing_ok=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    verdict = "PASS" if status == EXIT_PASS else "FAIL"
    print(f"{verdict} {sc.kind} hash={sc.hash[:12]} -> {out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
