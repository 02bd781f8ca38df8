"""Configurations, distances, and the assignment size functional."""

import itertools
import math

import numpy as np
import pytest

from pointres import (brute_force_V, config_from_json, config_to_json,
                      diameter, distance_matrix, new_configuration, size_V)
from pointres.errors import DuplicatePoints, EmptyConfiguration, TooLarge


def random_points(rng, n, scale=1.0):
    return [tuple(scale * x) for x in rng.standard_normal((n, 3))]


class TestNewConfiguration:
    def test_empty(self):
        c = new_configuration([], alpha=1.0)
        assert c.n == 0
        assert c.min_sep == math.inf

    def test_two_points(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0)], alpha=1.0)
        assert c.n == 2
        assert c.min_sep == 1.0

    def test_near_duplicate_rejected(self):
        with pytest.raises(DuplicatePoints) as exc:
            new_configuration([(0, 0, 0), (1e-15, 0, 0)], alpha=1.0)
        assert set(exc.value.indices) == {0, 1}

    def test_single_point_allowed(self):
        c = new_configuration([(2, 3, 4)], alpha=0.5 + 1j)
        assert c.n == 1
        assert c.alpha == 0.5 + 1j


class TestDistanceMatrix:
    def test_single(self):
        c = new_configuration([(1, 2, 3)], alpha=1.0)
        assert np.array_equal(distance_matrix(c), [[0.0]])

    def test_3_4_5(self):
        c = new_configuration([(0, 0, 0), (3, 4, 0)], alpha=1.0)
        d = distance_matrix(c)
        assert d[0, 1] == 5.0
        assert d[1, 0] == 5.0

    def test_matches_direct_recomputation(self):
        rng = np.random.default_rng(7)
        pts = random_points(rng, 5)
        d = distance_matrix(new_configuration(pts, alpha=1.0))
        for i in range(5):
            for j in range(5):
                assert d[i, j] == pytest.approx(math.dist(pts[i], pts[j]), abs=1e-14)

    def test_symmetric_zero_diagonal(self):
        rng = np.random.default_rng(8)
        d = distance_matrix(new_configuration(random_points(rng, 6), alpha=1.0))
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0.0)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(9)
        d = distance_matrix(new_configuration(random_points(rng, 6), alpha=1.0))
        n = d.shape[0]
        for i, j, k in itertools.permutations(range(n), 3):
            assert d[i, j] <= d[i, k] + d[k, j] + 1e-12


class TestDiameter:
    def test_empty_is_zero(self):
        assert diameter(new_configuration([], alpha=1.0)) == 0.0

    def test_single_is_zero(self):
        assert diameter(new_configuration([(5, 5, 5)], alpha=1.0)) == 0.0

    def test_collinear(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0), (0.5, 0, 0)], alpha=1.0)
        assert diameter(c) == 1.0

    def test_equals_exhaustive_pair_scan(self):
        rng = np.random.default_rng(10)
        pts = random_points(rng, 6)
        want = max(math.dist(p, q) for p, q in itertools.combinations(pts, 2))
        assert diameter(new_configuration(pts, alpha=1.0)) == pytest.approx(want, rel=1e-15)


class TestSizeV:
    def test_empty_raises(self):
        with pytest.raises(EmptyConfiguration):
            size_V(new_configuration([], alpha=1.0))

    def test_single(self):
        res = size_V(new_configuration([(1, 1, 1)], alpha=1.0))
        assert res.value == 0.0
        assert res.argmax_permutation == (0,)

    def test_two_points_transposition(self):
        res = size_V(new_configuration([(0, 0, 0), (0, 0, 2.5)], alpha=1.0))
        assert res.value == pytest.approx(5.0, rel=1e-15)
        assert res.argmax_permutation == (1, 0)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(2, 8))
            c = new_configuration(random_points(rng, n), alpha=1.0)
            assert size_V(c).value == pytest.approx(brute_force_V(c).value, rel=1e-12)

    def test_lower_bounds(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            c = new_configuration(random_points(rng, n), alpha=1.0)
            v = size_V(c).value
            assert v >= 2.0 * diameter(c) - 1e-12
            assert diameter(c) - 1e-12 <= v <= n * diameter(c) + 1e-12

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(13)
        pts = np.array(random_points(rng, 5))
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        shift = rng.standard_normal(3)
        moved = pts @ q.T + shift
        v0 = size_V(new_configuration([tuple(p) for p in pts], alpha=1.0)).value
        v1 = size_V(new_configuration([tuple(p) for p in moved], alpha=1.0)).value
        assert abs(v1 - v0) < 1e-9 * max(1.0, v0)

    def test_value_is_assignment_objective(self):
        rng = np.random.default_rng(14)
        pts = random_points(rng, 5)
        c = new_configuration(pts, alpha=1.0)
        res = size_V(c)
        d = distance_matrix(c)
        objective = sum(d[j, res.argmax_permutation[j]] for j in range(5))
        assert res.value == pytest.approx(objective, rel=1e-14)


class TestBruteForceV:
    def test_single(self):
        assert brute_force_V(new_configuration([(0, 0, 0)], alpha=1.0)).value == 0.0

    def test_two_points(self):
        c = new_configuration([(0, 0, 0), (3, 0, 0)], alpha=1.0)
        assert brute_force_V(c).value == pytest.approx(6.0, rel=1e-15)

    def test_unit_square(self):
        # two diagonal transpositions, each contributing 2*sqrt(2)
        c = new_configuration([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], alpha=1.0)
        assert brute_force_V(c).value == pytest.approx(4 * math.sqrt(2), rel=1e-14)

    def test_too_large(self):
        rng = np.random.default_rng(15)
        c = new_configuration(random_points(rng, 9), alpha=1.0)
        with pytest.raises(TooLarge):
            brute_force_V(c)


def test_tie_break_is_lexicographic():
    # the unit square has several maximizing permutations; both routes must
    # pick the lexicographically smallest word
    c = new_configuration([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], alpha=1.0)
    d = distance_matrix(c)
    best = brute_force_V(c).value
    winners = [p for p in itertools.permutations(range(4))
               if abs(sum(d[j, p[j]] for j in range(4)) - best) <= 1e-12 * best]
    assert size_V(c).argmax_permutation == min(winners)
    assert brute_force_V(c).argmax_permutation == min(winners)


def test_json_round_trip():
    c = new_configuration([(0, 1, 2), (3, 4, 5.5)], alpha=1.0 - 2.0j)
    obj = config_to_json(c)
    assert obj["alpha"] == [1.0, -2.0]
    assert obj["points"] == [[0.0, 1.0, 2.0], [3.0, 4.0, 5.5]]
    back = config_from_json(obj)
    assert back.alpha == c.alpha
    assert np.array_equal(np.asarray(back.points), np.asarray(c.points))
