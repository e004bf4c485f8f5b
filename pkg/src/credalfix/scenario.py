"""Scenario files: YAML text validated against a JSON Schema.

A scenario names an experiment ``kind``, an optional ``seed`` and a
``params`` map whose keys depend on the kind. :func:`load_scenario` parses,
validates and then builds domain objects (rules, credal sets, likelihoods)
so that callers never touch raw text. The schema ships with the package as
``scenario.schema.json``.
"""
from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np
import yaml

from .errors import CredalError, ScenarioError
from .geometry import IntervalCredal, random_fgcs, reduce
from .rules import rule_from_descriptor
from .simplex import Dist, Likelihood

KINDS = ("iterate", "contract", "psi", "counterexample", "sandwich", "gaussian", "uniqueness")
SCHEMA_VERSION = 1

#: kinds that accept ``--tol`` / ``--max-iter`` overrides
TOL_KINDS = frozenset({"iterate", "uniqueness", "counterexample", "sandwich"})
MAX_ITER_KINDS = TOL_KINDS


def load_schema() -> dict:
    text = resources.files("credalfix").joinpath("scenario.schema.json").read_text()
    return json.loads(text)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def validate_raw(raw) -> dict:
    """Check ``raw`` against the schema; raise naming the offending key."""
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = list(validator.iter_errors(raw))
    if errors:
        # deepest error is the most specific one
        err = max(errors, key=lambda e: (len(e.absolute_path), -len(list(e.context))))
        leaf = err
        while leaf.context:
            leaf = max(leaf.context, key=lambda e: len(e.absolute_path))
        raise ScenarioError(f"{_path(leaf.absolute_path)}: {leaf.message}")
    return raw


def parse_text(text: str, source: str = "<string>"):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        problem = getattr(exc, "problem", None) or str(exc)
        raise ScenarioError(f"{source}: parse error at {where}: {problem}") from exc


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def scenario_hash(raw: dict) -> str:
    return hashlib.sha256(canonical_json(raw).encode()).hexdigest()


@dataclass(frozen=True)
class Scenario:
    """A validated scenario.

    ``raw`` is the validated mapping (after flag overrides) and ``objects``
    holds the domain objects built from it.
    """

    kind: str
    seed: int
    raw: dict = field(repr=False)
    objects: dict = field(repr=False)

    @property
    def params(self) -> dict:
        return self.raw["params"]

    @property
    def hash(self) -> str:
        return scenario_hash(self.raw)


def _build(where: str, fn, *args):
    try:
        return fn(*args)
    except CredalError as exc:
        # keep the specific error class, add the location
        if exc.args:
            exc.args = (f"{where}: {exc.args[0]}",) + exc.args[1:]
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def build_set(spec: dict, where: str):
    if "interval" in spec:
        lo, hi = spec["interval"]
        return _build(f"{where}.interval", IntervalCredal, lo, hi)
    points = [_build(f"{where}.extremes[{i}]", Dist, row) for i, row in enumerate(spec["extremes"])]
    return _build(f"{where}.extremes", reduce, points)


def _interval(pair, where: str) -> IntervalCredal:
    return _build(where, IntervalCredal, pair[0], pair[1])


def _rule(spec, where: str):
    return _build(where, rule_from_descriptor, spec)


def _construct(kind: str, p: dict, seed: int) -> dict:
    obj = {}
    if kind == "iterate":
        obj["rule"] = _rule(p["rule"], "params.rule")
        obj["start"] = build_set(p["start"], "params.start")
        if "fixed_point" in p:
            obj["fixed_point"] = build_set(p["fixed_point"], "params.fixed_point")
    elif kind == "uniqueness":
        obj["rule"] = _rule(p["rule"], "params.rule")
        if "starts" in p:
            obj["starts"] = [build_set(s, f"params.starts[{i}]") for i, s in enumerate(p["starts"])]
        else:
            rs = p["random_starts"]
            rng = np.random.default_rng(seed)
            obj["starts"] = [_build("params.random_starts", random_fgcs, rng, rs["dim"], rs["n_points"])
                             for _ in range(rs["count"])]
    elif kind == "contract":
        obj["likelihoods"] = [_build(f"params.likelihoods[{i}]", Likelihood, v)
                              for i, v in enumerate(p["likelihoods"])]
        dims = {ell.dim for ell in obj["likelihoods"]}
        if p.get("mode", "point") == "set" and len(dims) != 1:
            raise ScenarioError(f"params.likelihoods: vectors disagree on dim: {sorted(dims)}")
    elif kind == "psi":
        obj["rule"] = _rule(p["rule"], "params.rule")
        s = p["sampler"]
        if s["type"] == "random_fgcs":
            for key in ("dim", "n_points"):
                if key not in s:
                    raise ScenarioError(f"params.sampler: random_fgcs sampler needs {key!r}")
        else:
            for key in ("lo_range", "hi_range"):
                if key not in s:
                    raise ScenarioError(f"params.sampler: interval sampler needs {key!r}")
    elif kind == "counterexample":
        from .rules import ShiftRule

        obj["rule"] = _build("params.delta", ShiftRule, p["delta"])
        obj["start"] = _interval(p["start"], "params.start")
    elif kind == "sandwich":
        rules = [_rule(r, f"params.rules[{i}]") for i, r in enumerate(p["rules"])]
        for i, r in enumerate(rules):
            if r.domain != "interval":
                raise ScenarioError(f"params.rules[{i}]: sandwich rules must act on intervals")
        for i, j in enumerate(p["schedule"]):
            if j >= len(rules):
                raise ScenarioError(f"params.schedule[{i}]: index {j} out of range 0..{len(rules) - 1}")
        obj["rules"] = rules
        obj["start"] = _interval(p["start"], "params.start")
    elif kind == "gaussian":
        from .gaussian import GaussianFGCS

        obj["init"] = _build("params", GaussianFGCS.from_lists, p["mu"], p["tau2"])
    return obj


def from_mapping(raw, source: str = "<mapping>") -> Scenario:
    """Validate a parsed mapping and construct its domain objects."""
    if not isinstance(raw, dict):
        raise ScenarioError(f"{source}: top level must be a mapping, got {type(raw).__name__}")
    raw = copy.deepcopy(raw)
    validate_raw(raw)
    seed = int(raw.get("seed", 0))
    raw["seed"] = seed
    try:
        canonical_json(raw)
    except ValueError as exc:
        raise ScenarioError(f"{source}: {exc}") from exc
    objects = _construct(raw["kind"], raw["params"], seed)
    return Scenario(raw["kind"], seed, raw, objects)


def load_scenario(path, overrides: dict | None = None) -> Scenario:
    """Read, validate and construct the scenario at ``path``.

    ``overrides`` may set ``seed``, ``tol`` or ``max_iter``; the latter two
    are written into ``params`` and only apply to kinds that use them.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {str(path)!r}: {exc.strerror or exc}") from exc
    raw = parse_text(text, str(path))
    if isinstance(raw, dict) and overrides:
        raw = apply_overrides(raw, overrides)
    return from_mapping(raw, str(path))


def apply_overrides(raw: dict, overrides: dict) -> dict:
    raw = copy.deepcopy(raw)
    kind = raw.get("kind")
    params = raw.setdefault("params", {})
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "seed":
            raw["seed"] = int(value)
        elif key in ("tol", "max_iter"):
            allowed = TOL_KINDS if key == "tol" else MAX_ITER_KINDS
            if kind not in allowed:
                flag = "--" + key.replace("_", "-")
                raise ScenarioError(f"{flag} does not apply to kind {kind!r}")
            if isinstance(params, dict):
                params[key] = value
        else:
            raise ScenarioError(f"unknown override {key!r}")
    return raw
