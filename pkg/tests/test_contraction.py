import math

import numpy as np
import pytest

from credalfix import contraction
from credalfix.contraction import (
    birkhoff_tau,
    estimate_psi,
    verify_point_contraction,
    verify_set_contraction,
)
from credalfix.errors import ParameterError, SamplingError
from credalfix.geometry import FGCS, IntervalCredal, random_fgcs
from credalfix.rules import AnchorContraction, CBDLRule, ShiftRule


class TestBirkhoffTau:
    def test_equal_bounds(self):
        assert birkhoff_tau(2.0, 2.0) == 0.0

    def test_e4(self):
        assert birkhoff_tau(1.0, math.e ** 4) == pytest.approx(0.7615941559557649, abs=1e-15)

    def test_nine(self):
        assert birkhoff_tau(1.0, 9.0) == pytest.approx(0.5, abs=1e-15)

    def test_increasing_and_below_one(self):
        r = np.logspace(0, 3, 200)
        taus = [birkhoff_tau(1.0, x) for x in r]
        assert all(b > a for a, b in zip(taus, taus[1:]))
        assert max(taus) < 1.0

    def test_scale_free(self):
        assert birkhoff_tau(0.5, 1.5) == pytest.approx(birkhoff_tau(2.0, 6.0), abs=1e-15)

    @pytest.mark.parametrize("alpha, beta", [(0.0, 1.0), (-1.0, 1.0), (2.0, 1.0), (1.0, math.inf)])
    def test_bad_args(self, alpha, beta):
        with pytest.raises(ParameterError):
            birkhoff_tau(alpha, beta)


class TestPointContraction:
    """The tilt is a Hilbert isometry, so observed ratios sit at 1."""

    @pytest.mark.parametrize("ell", [[1.0, 3.0], [1.0, 2.0, 5.0, 100.0, 7.0]])
    def test_ratio_is_one(self, ell):
        rep = verify_point_contraction(ell, 2000, seed=1)
        assert rep.max_observed_ratio == pytest.approx(1.0, abs=1e-9)
        assert rep.min_observed_ratio == pytest.approx(1.0, abs=1e-9)
        assert rep.violations == rep.trials
        assert not rep.passed

    def test_constant_likelihood(self):
        rep = verify_point_contraction([2.0, 2.0, 2.0], 500)
        assert rep.tau_bound == 0.0
        # identity map: distances are unchanged, not collapsed
        assert rep.max_observed_ratio == pytest.approx(1.0, abs=1e-9)

    def test_deterministic(self):
        a = verify_point_contraction([1.0, 3.0], 100, seed=4)
        b = verify_point_contraction([1.0, 3.0], 100, seed=4)
        assert a.todict() == b.todict()

    def test_worst_case_is_pair(self):
        rep = verify_point_contraction([1.0, 3.0, 2.0], 50)
        p, q = rep.worst_case
        assert p.shape == q.shape == (3,)

    def test_trials(self):
        with pytest.raises(ParameterError):
            verify_point_contraction([1.0, 3.0], 0)


class TestSetContraction:
    def test_single_likelihood_singletons(self):
        rep = verify_set_contraction([[1.0, 3.0]], 300, max_set_size=1)
        assert rep.max_observed_ratio == pytest.approx(1.0, abs=1e-9)
        assert rep.min_observed_ratio == pytest.approx(1.0, abs=1e-9)

    def test_single_likelihood_sets(self):
        # a common tilt moves every pairwise distance by nothing
        rep = verify_set_contraction([[1.0, 2.0, 4.0]], 300, max_set_size=4)
        assert rep.max_observed_ratio == pytest.approx(1.0, abs=1e-9)

    def test_two_likelihoods(self):
        rep = verify_set_contraction([[1.0, 3.0], [2.0, 1.0]], 500, max_set_size=3)
        assert rep.tau_bound == pytest.approx(birkhoff_tau(1, 3))
        assert rep.violations > 0
        assert rep.max_observed_ratio > rep.tau_bound

    def test_deterministic(self):
        a = verify_set_contraction([[1.0, 3.0], [2.0, 1.0]], 50, seed=9)
        b = verify_set_contraction([[1.0, 3.0], [2.0, 1.0]], 50, seed=9)
        assert a.todict() == b.todict()

    def test_empty(self):
        with pytest.raises(ParameterError):
            verify_set_contraction([], 10)


def binary_sampler(rng):
    a, b = np.sort(rng.uniform(0.05, 0.95, size=2))
    return IntervalCredal(a, b).to_fgcs()


class TestPsi:
    @pytest.mark.parametrize("gamma", [0.2, 0.5, 0.8])
    def test_anchor_on_binary(self, gamma):
        t_grid = [0.01, 0.05, 0.1, 0.3]
        est = estimate_psi(AnchorContraction(gamma, 0.4), binary_sampler, t_grid, 30, seed=2)
        for t, p in zip(t_grid, est.psi_hat):
            assert p <= (1 - gamma) * t + 1e-9
        assert est.all_below
        assert list(est.psi_hat) == sorted(est.psi_hat)

    def test_shift_straddling_discontinuity(self):
        delta = 0.1

        def sampler(rng):
            return IntervalCredal(rng.uniform(0.2, 0.5), rng.uniform(0.895, 0.905))

        est = estimate_psi(ShiftRule(delta), sampler, [0.005, 0.01, 0.02], 100, metric="interval")
        assert est.psi_hat[0] >= delta - 1e-9
        assert not est.all_below

    def test_cbdl_hilbert_bins(self):
        rule = CBDLRule([[1.0, 2.0, 3.0]])
        est = estimate_psi(rule, lambda rng: random_fgcs(rng, 3, 3), [0.05, 0.1, 0.2], 30,
                           metric="finite_hilbert")
        # images keep their Hilbert spread, far above tanh(log(3)/4) ~ 0.27
        assert max(est.ratios) > 0.9
        assert list(est.psi_hat) == sorted(est.psi_hat)

    def test_cbdl_tv_bins_below_diagonal(self):
        rule = CBDLRule([[1.0, 2.0, 3.0]])
        est = estimate_psi(rule, lambda rng: random_fgcs(rng, 3, 2), [0.05, 0.1], 20)
        assert est.todict()["estimate"] == "lower"
        assert all(p >= 0 for p in est.psi_hat)

    def test_sampling_error_names_bin(self, monkeypatch):
        far = FGCS([[0.9, 0.1]])
        monkeypatch.setattr(contraction, "_perturb_fgcs", lambda rng, base, t: far)
        with pytest.raises(SamplingError) as info:
            estimate_psi(AnchorContraction(0.5, 0.5), lambda rng: FGCS([[0.1, 0.9]]), [0.01], 5,
                         retry_factor=2)
        assert info.value.bin_index == 0
        assert "bin 0" in str(info.value)

    def test_bad_grid(self):
        with pytest.raises(ParameterError):
            estimate_psi(AnchorContraction(0.5, 0.5), binary_sampler, [0.2, 0.1], 5)

    def test_interval_sampler_needs_interval_metric(self):
        with pytest.raises(ParameterError):
            estimate_psi(AnchorContraction(0.5, 0.5), lambda rng: IntervalCredal(0.2, 0.4), [0.1], 5)
