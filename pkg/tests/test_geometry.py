import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credalfix.errors import DimensionError, EmptyCredalError, ParameterError, PositivityError
from credalfix.geometry import (
    FGCS,
    IntervalCredal,
    contains,
    hausdorff_finite_hilbert,
    hausdorff_interval,
    hausdorff_tv,
    includes,
    point_to_set_tv,
    random_fgcs,
    reduce,
    set_distance,
    support_function,
)
from credalfix.simplex import Dist, support_value
from oracles import finite_hilbert_hausdorff, grid_hausdorff_tv, scipy_hull_tv

BINARY = FGCS.simplex(2)


def rows(s):
    return sorted(map(tuple, np.round(s.matrix, 12)))


class TestFGCS:
    def test_empty(self):
        with pytest.raises(EmptyCredalError):
            FGCS([])

    def test_mixed_dims(self):
        with pytest.raises(DimensionError):
            FGCS([[0.5, 0.5], [0.2, 0.3, 0.5]])

    def test_reduced_flag_verified(self):
        with pytest.raises(ParameterError):
            FGCS([[1, 0], [0, 1], [0.5, 0.5]], reduced=True)
        assert FGCS([[1, 0], [0, 1]], reduced=True).reduced

    def test_equality_ignores_order(self):
        assert FGCS([[1, 0], [0, 1]]) == FGCS([[0, 1], [1, 0]])


class TestReduce:
    def test_midpoint_dropped(self):
        assert rows(reduce([[1, 0], [0, 1], [0.5, 0.5]])) == [(0.0, 1.0), (1.0, 0.0)]

    def test_singleton(self):
        assert reduce([[0.3, 0.7]]).tolist() == [[0.3, 0.7]]

    def test_barycenter(self):
        out = reduce([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1 / 3, 1 / 3, 1 / 3]])
        assert rows(out) == rows(FGCS.simplex(3))

    def test_empty(self):
        with pytest.raises(EmptyCredalError):
            reduce([])

    def test_duplicates_collapse(self):
        assert len(reduce([[0.2, 0.8], [0.2, 0.8], [0.2, 0.8]])) == 1

    def test_hull_preserving_and_idempotent(self, rng):
        for _ in range(40):
            dim = int(rng.integers(2, 5))
            pts = rng.dirichlet(np.ones(dim), size=int(rng.integers(1, 9)))
            s = reduce(list(pts))
            assert all(contains(s, p) for p in pts)
            again = reduce(list(s.matrix))
            assert rows(again) == rows(s)

    def test_order_independent(self, rng):
        for _ in range(20):
            pts = rng.dirichlet(np.ones(3), size=7)
            perm = rng.permutation(7)
            assert rows(reduce(list(pts))) == rows(reduce(list(pts[perm])))

    def test_extremes_are_not_redundant(self, rng):
        for _ in range(20):
            s = reduce(list(rng.dirichlet(np.ones(3), size=8)))
            if len(s) > 1:
                FGCS(s.extremes, reduced=True)


class TestMembership:
    @pytest.mark.parametrize("ext, p, expected", [
        ([[1, 0], [0, 1]], [0.4, 0.6], True),
        ([[0.6, 0.4], [0.8, 0.2]], [0.5, 0.5], False),
        ([[0.3, 0.7]], [0.3, 0.7], True),
    ])
    def test_contains_examples(self, ext, p, expected):
        assert contains(FGCS(ext), p) is expected

    def test_contains_dim_mismatch(self):
        with pytest.raises(DimensionError):
            contains(BINARY, [0.2, 0.3, 0.5])

    def test_tolerance(self):
        s = FGCS([[0.6, 0.4], [0.8, 0.2]])
        assert contains(s, [0.6 - 5e-10, 0.4 + 5e-10])
        assert not contains(s, [0.6 - 1e-8, 0.4 + 1e-8])

    def test_includes_examples(self, rng):
        for _ in range(5):
            assert includes(BINARY, random_fgcs(rng, 2, 3))
        a = FGCS([[0.6, 0.4], [0.8, 0.2]])
        b = FGCS([[0.65, 0.35]])
        assert includes(a, b)
        assert not includes(b, a)

    def test_includes_dim_mismatch(self):
        with pytest.raises(DimensionError):
            includes(BINARY, FGCS.simplex(3))


class TestSupportFunction:
    def test_singleton(self):
        assert support_function(FGCS([[0.3, 0.7]]), [2, -1]) == pytest.approx(support_value(Dist([0.3, 0.7]), [2, -1]))

    def test_vertex_max(self):
        assert support_function(BINARY, [2, 5]) == 5

    def test_total_mass(self, rng):
        s = random_fgcs(rng, 4, 5)
        assert support_function(s, np.ones(4)) == pytest.approx(1.0)

    def test_separation(self, rng):
        # distinct reduced sets are told apart by some direction
        dirs = rng.normal(size=(1000, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for _ in range(30):
            a, b = random_fgcs(rng, 3, 3), random_fgcs(rng, 3, 3)
            mutual = includes(a, b) and includes(b, a)
            assert not mutual
            ha = np.array([support_function(a, d) for d in dirs])
            hb = np.array([support_function(b, d) for d in dirs])
            gap = np.abs(ha - hb).max()
            if gap <= 1e-9:
                extra = [u - v for u in a.matrix for v in b.matrix]
                gap = max(abs(support_function(a, d) - support_function(b, d)) for d in extra)
            assert gap > 1e-9


class TestPointToSet:
    def test_inside(self):
        assert point_to_set_tv([0.5, 0.5], BINARY) == pytest.approx(0.0, abs=1e-12)

    def test_examples(self):
        assert point_to_set_tv([0.5, 0.5], FGCS([[0.6, 0.4], [0.8, 0.2]])) == pytest.approx(0.1)
        assert point_to_set_tv([1, 0], FGCS([[0, 1]])) == pytest.approx(1.0)

    def test_against_highs(self, rng):
        for _ in range(100):
            dim = int(rng.integers(2, 6))
            s = random_fgcs(rng, dim, int(rng.integers(1, 6)))
            p = rng.dirichlet(np.ones(dim))
            assert point_to_set_tv(p, s) == pytest.approx(scipy_hull_tv(p, s.matrix), abs=1e-10)


class TestHausdorffTV:
    def test_identical(self, rng):
        s = random_fgcs(rng, 3, 4)
        assert hausdorff_tv(s, s) == pytest.approx(0.0, abs=1e-12)

    def test_examples(self):
        a = FGCS([[0.6, 0.4], [0.8, 0.2]])
        assert hausdorff_tv(a, FGCS([[0.7, 0.3]])) == pytest.approx(0.1)
        assert hausdorff_tv(BINARY, FGCS([[0.5, 0.5]])) == pytest.approx(0.5)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionError):
            hausdorff_tv(BINARY, FGCS.simplex(3))

    @pytest.mark.parametrize("dim", [2, 3])
    def test_grid_oracle(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(10):
            a = random_fgcs(rng, dim, int(rng.integers(1, 5)))
            b = random_fgcs(rng, dim, int(rng.integers(1, 5)))
            assert hausdorff_tv(a, b) == pytest.approx(grid_hausdorff_tv(a.matrix, b.matrix), abs=1e-3)

    def test_zero_iff_mutual_inclusion(self, rng):
        for _ in range(30):
            a = random_fgcs(rng, 3, 4)
            # same hull, different generating list
            mixed = list(a.matrix) + [a.matrix.mean(axis=0)]
            b = FGCS(mixed)
            assert hausdorff_tv(a, b) == pytest.approx(0.0, abs=1e-9)
            assert includes(a, b) and includes(b, a)
            c = random_fgcs(rng, 3, 4)
            assert (hausdorff_tv(a, c) <= 1e-9) == (includes(a, c) and includes(c, a))

    def test_metric_axioms(self, rng):
        sets = [random_fgcs(rng, 3, int(rng.integers(1, 5))) for _ in range(8)]
        D = np.array([[hausdorff_tv(a, b) for b in sets] for a in sets])
        np.testing.assert_allclose(D, D.T, atol=1e-12)
        for i in range(8):
            for j in range(8):
                for k in range(8):
                    assert D[i, k] <= D[i, j] + D[j, k] + 1e-9

    def test_hull_is_nonexpansive(self, rng):
        # d_H(CH A, CH B) <= d_H(A, B) for finite point sets under TV
        def finite_tv(A, B):
            D = 0.5 * np.abs(A[:, None, :] - B[None, :, :]).sum(axis=2)
            return max(D.min(axis=1).max(), D.min(axis=0).max())

        for _ in range(50):
            A = rng.dirichlet(np.ones(3), size=int(rng.integers(1, 6)))
            B = rng.dirichlet(np.ones(3), size=int(rng.integers(1, 6)))
            assert hausdorff_tv(reduce(list(A)), reduce(list(B))) <= finite_tv(A, B) + 1e-9


class TestFiniteHilbert:
    def test_examples(self):
        s = [[0.5, 0.5], [0.25, 0.75]]
        assert hausdorff_finite_hilbert(s, s) == 0.0
        assert hausdorff_finite_hilbert([[0.9, 0.1]], [[0.1, 0.9]]) == pytest.approx(math.log(81))
        assert hausdorff_finite_hilbert(s, [[0.5, 0.5]]) == pytest.approx(math.log(3))

    def test_positivity(self):
        with pytest.raises(PositivityError):
            hausdorff_finite_hilbert([[1.0, 0.0]], [[0.5, 0.5]])

    def test_against_double_loop(self, rng):
        for _ in range(30):
            S = rng.dirichlet(np.ones(4), size=int(rng.integers(1, 6)))
            T = rng.dirichlet(np.ones(4), size=int(rng.integers(1, 6)))
            assert hausdorff_finite_hilbert(S, T) == pytest.approx(finite_hilbert_hausdorff(S, T), abs=1e-12)


class TestInterval:
    def test_invariants(self):
        with pytest.raises(ParameterError):
            IntervalCredal(0.6, 0.5)
        with pytest.raises(ParameterError):
            IntervalCredal(-0.1, 0.5)

    @pytest.mark.parametrize("a, b, expected", [
        ((0.2, 0.3), (0.2, 0.3), 0.0),
        ((0.2, 0.3), (0.3, 0.4), 0.1),
        ((0.0, 1.0), (0.5, 0.5), 0.5),
    ])
    def test_examples(self, a, b, expected):
        assert hausdorff_interval(IntervalCredal(*a), IntervalCredal(*b)) == pytest.approx(expected)

    @settings(max_examples=100)
    @given(st.tuples(st.floats(0, 1), st.floats(0, 1)), st.tuples(st.floats(0, 1), st.floats(0, 1)))
    def test_matches_embedded_tv(self, a, b):
        I, J = IntervalCredal(*sorted(a)), IntervalCredal(*sorted(b))
        assert hausdorff_tv(I.to_fgcs(), J.to_fgcs()) == pytest.approx(hausdorff_interval(I, J), abs=1e-9)
        assert set_distance(I, J, "tv_hausdorff") == pytest.approx(hausdorff_interval(I, J), abs=1e-9)

    def test_round_trip(self):
        I = IntervalCredal(0.2, 0.7)
        assert IntervalCredal.from_fgcs(I.to_fgcs()) == I

    def test_includes(self):
        assert IntervalCredal(0.1, 0.9).includes(IntervalCredal(0.2, 0.3))
        assert not IntervalCredal(0.2, 0.3).includes(IntervalCredal(0.1, 0.9))


class TestSetDistance:
    def test_unknown_metric(self):
        with pytest.raises(ParameterError):
            set_distance(BINARY, BINARY, "euclid")

    def test_hilbert_needs_positive(self):
        with pytest.raises(PositivityError):
            set_distance(BINARY, BINARY, "finite_hilbert")
