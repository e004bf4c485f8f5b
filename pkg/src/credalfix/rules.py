"""Update rules on credal sets.

Two families live here:

* rules on finitely generated credal sets over a finite parameter space:
  the elementwise Bayes update of every extreme prior by every extreme
  likelihood followed by a convex hull (:func:`cbdl_update`), and its
  pessimistic variant that takes an atom-wise infimum over a class of
  evidence items (:func:`pcbdl_update`);
* rules on interval credal sets over a binary space: the discontinuous
  shift with no fixed point, the monotone anchor contraction, and the
  lower/upper envelopes of a rule family.

Rules are immutable objects with ``apply`` (also ``__call__``) and a
serializable ``descriptor``.
"""
from __future__ import annotations

import abc
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    AdditivityViolationError,
    DimensionError,
    EmptyEnvelopeError,
    EmptyEvidenceError,
    ParameterError,
    PositivityError,
)
from .geometry import FGCS, IntervalCredal, hausdorff_interval, hausdorff_tv, reduce
from .simplex import Likelihood, PositiveDist, bayes_tilt

#: tolerance for deciding that one evidence item attains every atom infimum
MINIMIZER_TOL = 1e-12


class MinimizerDependenceWarning(UserWarning):
    """The minimizing evidence item differs between extreme priors."""


def _likelihood(x) -> Likelihood:
    return x if isinstance(x, Likelihood) else Likelihood(x)


def _positive_extremes(prior: FGCS) -> list:
    out = []
    for i, p in enumerate(prior.extremes):
        if not p.is_positive():
            raise PositivityError(f"prior extreme {i} has a zero weight: {p!r}")
        out.append(PositiveDist.from_dist(p))
    return out


# ---------------------------------------------------------------------------
# rules on finitely generated credal sets


def cbdl_update(prior: FGCS, likelihoods) -> FGCS:
    """Bayes-update every stored extreme by every likelihood, then reduce.

    The output has at most ``len(prior) * len(likelihoods)`` extremes.
    """
    lik = [_likelihood(ell) for ell in likelihoods]
    if not lik:
        raise ParameterError("need at least one likelihood")
    for k, ell in enumerate(lik):
        if ell.dim != prior.dim:
            raise DimensionError(f"likelihood {k} has dim {ell.dim}, prior has dim {prior.dim}")
    images = [bayes_tilt(p, ell) for p in _positive_extremes(prior) for ell in lik]
    return reduce(images)


class EvidenceClass:
    """Labelled evidence items, each carrying one likelihood per index ``k``.

    ``items`` is a mapping ``label -> [likelihood_1, ..., likelihood_K]`` or
    a sequence of ``(label, likelihoods)`` pairs.
    """

    def __init__(self, items):
        pairs = list(items.items()) if isinstance(items, dict) else list(items)
        if not pairs:
            raise EmptyEvidenceError("evidence class is empty")
        labels, liks = [], []
        for label, group in pairs:
            group = [_likelihood(ell) for ell in group]
            if not group:
                raise EmptyEvidenceError(f"evidence item {label!r} has no likelihoods")
            labels.append(str(label))
            liks.append(group)
        if len(set(labels)) != len(labels):
            raise ParameterError("evidence labels must be unique")
        K = len(liks[0])
        dim = liks[0][0].dim
        for label, group in zip(labels, liks):
            if len(group) != K:
                raise ParameterError(f"evidence item {label!r} has {len(group)} likelihoods, expected {K}")
            for ell in group:
                if ell.dim != dim:
                    raise DimensionError(f"evidence item {label!r} has a likelihood of dim {ell.dim}, expected {dim}")
        self.labels = tuple(labels)
        self.likelihoods = tuple(tuple(g) for g in liks)
        self.K = K
        self.dim = dim

    def __len__(self):
        return len(self.labels)

    def item(self, label: str) -> tuple:
        return self.likelihoods[self.labels.index(label)]

    def todict(self) -> dict:
        return {lab: [ell.tolist() for ell in g] for lab, g in zip(self.labels, self.likelihoods)}

    def __repr__(self):
        return f"EvidenceClass(labels={list(self.labels)}, K={self.K}, dim={self.dim})"


class PessimisticUpdate(NamedTuple):
    """Result of one pessimistic update.

    ``weights`` is a :class:`PositiveDist` when a common minimizer exists,
    otherwise the raw (unnormalized) atom-wise infima. ``atom_minimizers``
    lists, per atom, the label of the first evidence item attaining it.
    """

    weights: object
    common_minimizer: bool
    minimizer_label: str | None
    atom_minimizers: tuple


def pcbdl_update(prior_extreme, k: int, evidence: EvidenceClass) -> PessimisticUpdate:
    """Atom-wise infimum over evidence items of the Bayes update of one prior.

    Singleton atoms suffice on a finite parameter space. When one item
    attains every atom infimum the result is the Bayes update by that item;
    otherwise the raw infima (which then sum to less than one) are returned
    with ``common_minimizer=False``.
    """
    if not isinstance(evidence, EvidenceClass):
        evidence = EvidenceClass(evidence)
    if len(evidence) == 0:
        raise EmptyEvidenceError("evidence class is empty")
    p = PositiveDist.from_dist(prior_extreme)
    if p.dim != evidence.dim:
        raise DimensionError(f"prior has dim {p.dim}, evidence has dim {evidence.dim}")
    if not 0 <= k < evidence.K:
        raise ParameterError(f"likelihood index {k} out of range 0..{evidence.K - 1}")

    post = np.array([ell[k].values * p.weights for ell in evidence.likelihoods])
    post /= post.sum(axis=1, keepdims=True)
    infima = post.min(axis=0)
    attains = post <= infima + MINIMIZER_TOL
    atom_min = tuple(evidence.labels[int(np.argmax(attains[:, i]))] for i in range(p.dim))
    common = np.flatnonzero(attains.all(axis=1))
    if common.size:
        e = int(common[0])
        return PessimisticUpdate(bayes_tilt(p, evidence.likelihoods[e][k]), True,
                                 evidence.labels[e], atom_min)
    return PessimisticUpdate(infima, False, None, atom_min)


def pcbdl_credal_update(prior: FGCS, evidence: EvidenceClass) -> FGCS:
    """Pessimistic update of a whole credal set; requires a common minimizer.

    Raises :class:`AdditivityViolationError` for the first (extreme, k)
    pair whose atom-wise minimizers disagree.
    """
    if not isinstance(evidence, EvidenceClass):
        evidence = EvidenceClass(evidence)
    images = []
    chosen = {}
    for e, p in enumerate(_positive_extremes(prior)):
        for k in range(evidence.K):
            res = pcbdl_update(p, k, evidence)
            if not res.common_minimizer:
                atoms = [(i, lab) for i, lab in enumerate(res.atom_minimizers)]
                raise AdditivityViolationError(
                    f"no single evidence item minimizes every atom for extreme {e}, k={k}; "
                    f"atom minimizers: {atoms}",
                    extreme=e, k=k, atoms=atoms,
                )
            chosen.setdefault(k, set()).add(res.minimizer_label)
            images.append(res.weights)
    for k, labels in chosen.items():
        if len(labels) > 1:
            warnings.warn(
                f"minimizing evidence for k={k} depends on the prior extreme: {sorted(labels)}",
                MinimizerDependenceWarning, stacklevel=2,
            )
    return reduce(images)


# ---------------------------------------------------------------------------
# rules on interval credal sets


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < 0.5:
        raise ParameterError(f"delta must lie in (0, 1/2), got {delta!r}")
    return delta


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise ParameterError(f"gamma must lie in (0, 1), got {gamma!r}")
    return gamma


def example4_shift(i: IntervalCredal, delta: float) -> IntervalCredal:
    """Shift right by ``delta`` while ``hi < 1 - delta``, else left and clip.

    Hausdorff-discontinuous at ``hi = 1 - delta`` and without fixed points.
    """
    delta = _check_delta(delta)
    if i.hi < 1.0 - delta:
        return IntervalCredal(i.lo + delta, min(i.hi + delta, 1.0))
    return IntervalCredal(max(0.0, i.lo - delta), i.hi - delta)


def anchor_contraction(i: IntervalCredal, gamma: float, anchor: float) -> IntervalCredal:
    """Pull both endpoints a fraction ``gamma`` of the way to ``anchor``.

    Monotone under inclusion and a ``(1 - gamma)``-contraction of the
    interval Hausdorff metric; the unique fixed point is ``[anchor, anchor]``.
    """
    gamma = _check_gamma(gamma)
    anchor = float(anchor)
    if not 0.0 <= anchor <= 1.0:
        raise ParameterError(f"anchor must lie in [0, 1], got {anchor!r}")
    keep = 1.0 - gamma
    return IntervalCredal(keep * i.lo + gamma * anchor, keep * i.hi + gamma * anchor)


# ---------------------------------------------------------------------------
# rule objects


class UpdateRule(abc.ABC):
    """A map from credal sets to credal sets.

    ``domain`` is ``"fgcs"`` or ``"interval"``; ``descriptor()`` returns a
    plain dict that :func:`rule_from_descriptor` turns back into a rule.
    """

    name: str = ""
    domain: str = "fgcs"

    @abc.abstractmethod
    def apply(self, s):
        ...

    @abc.abstractmethod
    def params(self) -> dict:
        ...

    def __call__(self, s):
        return self.apply(s)

    def descriptor(self) -> dict:
        return {"name": self.name, **self.params()}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class CBDLRule(UpdateRule):
    """Elementwise Bayes update with a fixed list of extreme likelihoods."""

    name = "cbdl"

    def __init__(self, likelihoods):
        self.likelihoods = tuple(_likelihood(ell) for ell in likelihoods)
        if not self.likelihoods:
            raise ParameterError("need at least one likelihood")
        dims = {ell.dim for ell in self.likelihoods}
        if len(dims) != 1:
            raise DimensionError(f"likelihoods disagree on dim: {sorted(dims)}")

    @property
    def tau(self) -> float:
        """Largest claimed per-likelihood contraction coefficient."""
        from .contraction import birkhoff_tau

        return max(birkhoff_tau(ell.alpha, ell.beta) for ell in self.likelihoods)

    def apply(self, s: FGCS) -> FGCS:
        return cbdl_update(s, self.likelihoods)

    def params(self) -> dict:
        return {"likelihoods": [ell.tolist() for ell in self.likelihoods]}


class PCBDLRule(UpdateRule):
    """Pessimistic update over a fixed evidence class."""

    name = "pcbdl"

    def __init__(self, evidence):
        self.evidence = evidence if isinstance(evidence, EvidenceClass) else EvidenceClass(evidence)

    def apply(self, s: FGCS) -> FGCS:
        return pcbdl_credal_update(s, self.evidence)

    def params(self) -> dict:
        return {"evidence": self.evidence.todict()}


class ShiftRule(UpdateRule):
    """The discontinuous interval shift without fixed points."""

    name = "example4_shift"
    domain = "interval"

    def __init__(self, delta: float):
        self.delta = _check_delta(delta)

    def apply(self, i: IntervalCredal) -> IntervalCredal:
        return example4_shift(i, self.delta)

    def params(self) -> dict:
        return {"delta": self.delta}


class AnchorContraction(UpdateRule):
    """Affine contraction of both endpoints toward an anchor."""

    name = "anchor_contraction"
    domain = "interval"

    def __init__(self, gamma: float, anchor: float):
        self.gamma = _check_gamma(gamma)
        self.anchor = float(anchor)
        if not 0.0 <= self.anchor <= 1.0:
            raise ParameterError(f"anchor must lie in [0, 1], got {anchor!r}")

    @property
    def fixed_point(self) -> IntervalCredal:
        return IntervalCredal(self.anchor, self.anchor)

    def apply(self, i: IntervalCredal) -> IntervalCredal:
        return anchor_contraction(i, self.gamma, self.anchor)

    def params(self) -> dict:
        return {"gamma": self.gamma, "anchor": self.anchor}


class _Envelope(UpdateRule):
    domain = "interval"

    def __init__(self, rules):
        self.rules = tuple(rules)
        if not self.rules:
            raise ParameterError("envelope of an empty rule family")
        for r in self.rules:
            if r.domain != "interval":
                raise ParameterError(f"envelopes are defined for interval rules only, got {r!r}")

    def params(self) -> dict:
        return {"rules": [r.descriptor() for r in self.rules]}


class LowerEnvelope(_Envelope):
    """Pointwise intersection of the rule outputs."""

    name = "lower_envelope"

    def apply(self, i: IntervalCredal) -> IntervalCredal:
        outs = [r.apply(i) for r in self.rules]
        lo = max(o.lo for o in outs)
        hi = min(o.hi for o in outs)
        if lo > hi:
            raise EmptyEnvelopeError(
                f"rule images of [{i.lo!r}, {i.hi!r}] have empty intersection ({lo!r} > {hi!r})"
            )
        return IntervalCredal(lo, hi)


class UpperEnvelope(_Envelope):
    """Smallest interval containing every rule output."""

    name = "upper_envelope"

    def apply(self, i: IntervalCredal) -> IntervalCredal:
        outs = [r.apply(i) for r in self.rules]
        return IntervalCredal(min(o.lo for o in outs), max(o.hi for o in outs))


class OnBinary(UpdateRule):
    """Run an interval rule on credal sets over a two-point space.

    Uses the embedding ``lam -> (1 - lam, lam)``.
    """

    domain = "fgcs"

    def __init__(self, rule: UpdateRule):
        if rule.domain != "interval":
            raise ParameterError(f"OnBinary wraps interval rules, got {rule!r}")
        self.rule = rule
        self.name = f"binary:{rule.name}"

    def apply(self, s: FGCS) -> FGCS:
        return self.rule.apply(IntervalCredal.from_fgcs(s)).to_fgcs()

    def params(self) -> dict:
        return {"rule": self.rule.descriptor()}


def envelope_maps(rules) -> tuple:
    """Lower (intersection) and upper (hull of union) envelopes of ``rules``."""
    rules = list(rules)
    return LowerEnvelope(rules), UpperEnvelope(rules)


def rule_from_descriptor(d: dict) -> UpdateRule:
    """Inverse of :meth:`UpdateRule.descriptor`."""
    d = dict(d)
    name = d.pop("name", None)
    if name == "cbdl":
        return CBDLRule(d["likelihoods"])
    if name == "pcbdl":
        return PCBDLRule(EvidenceClass(d["evidence"]))
    if name == "example4_shift":
        return ShiftRule(d["delta"])
    if name == "anchor_contraction":
        return AnchorContraction(d["gamma"], d["anchor"])
    if name == "lower_envelope":
        return LowerEnvelope([rule_from_descriptor(r) for r in d["rules"]])
    if name == "upper_envelope":
        return UpperEnvelope([rule_from_descriptor(r) for r in d["rules"]])
    if isinstance(name, str) and name.startswith("binary:"):
        return OnBinary(rule_from_descriptor(d["rule"]))
    raise ParameterError(f"unknown rule name {name!r}")


# ---------------------------------------------------------------------------
# probes


def random_interval(rng: np.random.Generator) -> IntervalCredal:
    a, b = np.sort(rng.random(2))
    return IntervalCredal(float(a), float(b))


def monotonicity_probe(rule: UpdateRule, trials: int = 200, seed: int = 0):
    """Search random nested pairs ``I ⊆ J`` for ``rule(I) ⊄ rule(J)``.

    Returns ``None`` when every probe passes, otherwise the witness
    ``(I, J, rule(I), rule(J))``. Passing is evidence, not a proof.
    """
    if rule.domain != "interval":
        raise ParameterError("monotonicity probing is implemented for interval rules")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        outer = random_interval(rng)
        a, b = np.sort(rng.uniform(outer.lo, outer.hi, size=2))
        inner = IntervalCredal(float(a), float(b))
        fi, fo = rule.apply(inner), rule.apply(outer)
        if not fo.includes(fi):
            return inner, outer, fi, fo
    return None


@dataclass(frozen=True)
class ContinuityReport:
    """Output distances observed on a decreasing sweep of perturbation scales.

    ``ratios[j] = max_out[j] / scales[j]`` is the empirical modulus. A
    discontinuity is flagged when the output distance at the finest scale is
    still at least half of that at the coarsest one, i.e. it does not shrink.
    """

    scales: tuple
    max_in: tuple
    max_out: tuple
    ratios: tuple
    jump: float
    discontinuity: bool

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)


def _perturb_interval(rng, base: IntervalCredal, scale: float) -> IntervalCredal:
    lo, hi = np.clip([base.lo, base.hi] + rng.uniform(-scale, scale, size=2), 0.0, 1.0)
    lo, hi = min(lo, hi), max(lo, hi)
    return IntervalCredal(float(lo), float(hi))


def _perturb_fgcs(rng, base: FGCS, scale: float) -> FGCS:
    m, d = base.matrix.shape
    targets = rng.dirichlet(np.ones(d), size=m)
    s = scale * rng.random(size=(m, 1))
    return reduce(list((1.0 - s) * base.matrix + s * targets))


def continuity_probe(rule: UpdateRule, base, perturbation_scale: float, trials: int,
                     seed: int = 0, levels: int = 4, factor: float = 10.0) -> ContinuityReport:
    """Probe Hausdorff continuity of ``rule`` at ``base``.

    For each scale ``perturbation_scale / factor**j`` (``j < levels``) draws
    ``trials`` random credal sets within Hausdorff distance ``scale`` of
    ``base`` and records the largest distance between their images and the
    image of ``base``.
    """
    if not perturbation_scale > 0:
        raise ParameterError("perturbation_scale must be positive")
    if trials < 1 or levels < 1:
        raise ParameterError("trials and levels must be at least 1")
    interval = isinstance(base, IntervalCredal)
    if interval and rule.domain != "interval":
        raise ParameterError("interval base needs an interval rule")
    if not interval and rule.domain != "fgcs":
        rule = OnBinary(rule)
    dist = hausdorff_interval if interval else hausdorff_tv
    perturb = _perturb_interval if interval else _perturb_fgcs
    rng = np.random.default_rng(seed)
    f_base = rule.apply(base)
    scales, max_in, max_out = [], [], []
    for j in range(levels):
        scale = perturbation_scale / factor ** j
        worst_in = worst_out = 0.0
        for _ in range(trials):
            q = perturb(rng, base, scale)
            worst_in = max(worst_in, dist(base, q))
            worst_out = max(worst_out, dist(f_base, rule.apply(q)))
        scales.append(scale)
        max_in.append(worst_in)
        max_out.append(worst_out)
    ratios = tuple(o / s for o, s in zip(max_out, scales))
    jump = max_out[-1]
    discontinuity = levels > 1 and jump > 0 and jump >= 0.5 * max_out[0]
    return ContinuityReport(tuple(scales), tuple(max_in), tuple(max_out), ratios,
                            jump, bool(discontinuity))
