"""Characteristic matrix, determinant, derivative, kernel, width."""

import cmath
import math

import numpy as np
import pytest

from pointres import (canonical_form, det_gamma, det_gamma_derivative,
                      det_gamma_log, eval_canonical, free_green, gamma_matrix,
                      modified_determinant, new_configuration,
                      resolvent_kernel, resonance_width)
from pointres.errors import (CoincidentArguments, EmptyConfiguration,
                             PointOnCenter, SingularGamma, ZeroSeparation)

FOUR_PI = 4.0 * math.pi


def ball_points(rng, n, scale=1.0):
    return [tuple(scale * x) for x in rng.standard_normal((n, 3))]


class TestFreeGreen:
    def test_static_unit_separation(self):
        assert free_green(0.0, (1, 0, 0)) == pytest.approx(1 / FOUR_PI, rel=1e-15)

    def test_imaginary_momentum(self):
        got = free_green(1j, (0, 1, 0))
        assert got == pytest.approx(math.exp(-1) / FOUR_PI, rel=1e-14)

    def test_against_independent_exp(self):
        # e^{2i-2}/(8 pi) built from real exp/cos/sin, not cmath
        want = math.exp(-2) * complex(math.cos(2), math.sin(2)) / (8 * math.pi)
        got = free_green(1 + 1j, (0, 0, 2))
        assert got == pytest.approx(want, rel=1e-14)

    def test_zero_separation(self):
        with pytest.raises(ZeroSeparation):
            free_green(1.0, (0, 0, 0))


class TestGammaMatrix:
    def test_single_center_static(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        assert np.array_equal(gamma_matrix(c, 0.0).matrix, [[1.0 + 0j]])

    def test_single_center_shifted(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        m = gamma_matrix(c, 4j * math.pi).matrix
        assert m[0, 0] == pytest.approx(2.0, rel=1e-15)

    def test_two_centers_static(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0)], alpha=1.0)
        m = gamma_matrix(c, 0.0).matrix
        want = np.array([[1.0, -1 / FOUR_PI], [-1 / FOUR_PI, 1.0]])
        assert np.allclose(m, want, rtol=1e-15, atol=0)

    def test_exact_symmetry(self):
        rng = np.random.default_rng(21)
        c = new_configuration(ball_points(rng, 5), alpha=1.0 + 0.5j)
        for z in (0.3 - 2j, 5.0, -7 + 0.1j):
            m = gamma_matrix(c, z).matrix
            assert np.array_equal(m, m.T)

    def test_empty_raises(self):
        with pytest.raises(EmptyConfiguration):
            gamma_matrix(new_configuration([], alpha=1.0), 0.0)


class TestDetGamma:
    def test_single_center_closed_form(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        for z in (0.0, 2.0 - 1j, -3j):
            assert det_gamma(c, z) == pytest.approx(1 - 1j * z / FOUR_PI, rel=1e-14)
        assert abs(det_gamma(c, -4j * math.pi)) < 1e-14

    def test_two_point_closed_form(self):
        ell, alpha = 1.0, 1.0
        c = new_configuration([(0, 0, 0), (ell, 0, 0)], alpha=alpha)
        rng = np.random.default_rng(22)
        for _ in range(10):
            z = complex(*rng.uniform(-20, 20, 2))
            want = (alpha - 1j * z / FOUR_PI) ** 2 \
                - (cmath.exp(1j * z * ell) / (FOUR_PI * ell)) ** 2
            assert det_gamma(c, z) == pytest.approx(want, rel=1e-12)

    def test_matches_symbolic_expansion(self):
        rng = np.random.default_rng(23)
        c = new_configuration(ball_points(rng, 5), alpha=1.0)
        p = canonical_form(c)
        for _ in range(20):
            z = complex(*rng.uniform(-30, 30, 2))
            want = eval_canonical(p, z) / (-FOUR_PI) ** 5
            assert det_gamma(c, z) == pytest.approx(want, rel=1e-9)

    def test_conjugation_symmetry(self):
        # real alpha: det(-conj(z)) = conj(det(z))
        rng = np.random.default_rng(24)
        c = new_configuration(ball_points(rng, 4), alpha=2.0)
        for _ in range(20):
            z = complex(*rng.uniform(-15, 15, 2))
            left = det_gamma(c, -z.conjugate())
            right = det_gamma(c, z).conjugate()
            assert left == pytest.approx(right, rel=1e-12)


class TestModifiedDeterminant:
    def test_no_centers_is_one(self):
        assert modified_determinant(new_configuration([], alpha=1.0), 3.7 - 1j) == 1.0

    def test_single_center(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        for z in (0.0, 1 + 1j, -5j):
            assert modified_determinant(c, z) == pytest.approx(1j * z - FOUR_PI, rel=1e-14)

    def test_two_point_exponential_polynomial(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0)], alpha=1.0)
        for z in (0.0, 2 - 0.5j, 7.0):
            want = (1j * z - FOUR_PI) ** 2 - cmath.exp(2j * z)
            assert modified_determinant(c, z) == pytest.approx(want, rel=1e-12)


class TestDerivative:
    def fd(self, c, z, h=1e-6):
        # Richardson-extrapolated central difference
        d1 = (det_gamma(c, z + h) - det_gamma(c, z - h)) / (2 * h)
        d2 = (det_gamma(c, z + 2 * h) - det_gamma(c, z - 2 * h)) / (4 * h)
        return (4 * d1 - d2) / 3

    def test_single_center_constant(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        for z in (0.0, 3 - 2j):
            assert det_gamma_derivative(c, z) == pytest.approx(-1j / FOUR_PI, rel=1e-14)

    def test_two_point_finite_difference(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0)], alpha=1.0)
        for z in (0.5, 2 - 1j, -3 + 0.2j):
            assert det_gamma_derivative(c, z) == pytest.approx(self.fd(c, z), rel=1e-6)

    def test_random_config_finite_difference(self):
        rng = np.random.default_rng(25)
        c = new_configuration(ball_points(rng, 4), alpha=1.0)
        for _ in range(10):
            z = complex(*rng.uniform(-10, 10, 2))
            assert det_gamma_derivative(c, z) == pytest.approx(self.fd(c, z), rel=1e-6)


class TestDetGammaLog:
    def test_reconstructs_determinant(self):
        rng = np.random.default_rng(26)
        c = new_configuration(ball_points(rng, 4), alpha=1.0)
        for _ in range(10):
            z = complex(*rng.uniform(-10, 10, 2))
            phase, la = det_gamma_log(c, z)
            assert cmath.exp(la + 1j * phase) == pytest.approx(det_gamma(c, z), rel=1e-9)

    def test_no_overflow_deep_in_lower_half_plane(self):
        c = new_configuration([(0, 0, 0), (1, 0, 0)], alpha=1.0)
        phase, la = det_gamma_log(c, 100.0 - 400.0j)
        assert math.isfinite(phase) and math.isfinite(la)

    def test_vectorized_matches_scalar(self):
        c = new_configuration([(0, 0, 0), (0, 0, 1.5)], alpha=1.0)
        zs = np.array([1 + 1j, -2 - 3j, 40 - 60j])
        ph, la = det_gamma_log(c, zs)
        for i, z in enumerate(zs):
            ps, ls = det_gamma_log(c, complex(z))
            assert ls == pytest.approx(la[i], rel=1e-12)
            assert cmath.exp(1j * (ph[i] - ps)) == pytest.approx(1.0, abs=1e-9)


class TestResolventKernel:
    def test_free_case(self):
        c = new_configuration([], alpha=1.0)
        x, xp = (0, 0, 0), (0, 0, 1)
        got = resolvent_kernel(c, 2.0 + 0.1j, x, xp)
        assert got.value == pytest.approx(free_green(2.0 + 0.1j, (0, 0, -1)), rel=1e-14)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(27)
        c = new_configuration(ball_points(rng, 3), alpha=1.0)
        for _ in range(5):
            x = tuple(rng.uniform(2, 3, 3))
            xp = tuple(rng.uniform(-3, -2, 3))
            z = complex(*rng.uniform(-5, 5, 2))
            a = resolvent_kernel(c, z, x, xp).value
            b = resolvent_kernel(c, z, xp, x).value
            assert a == pytest.approx(b, rel=1e-12)

    def test_blowup_rate_near_resonance(self):
        # |kernel| ~ 1/|det Gamma| approaching the single-center resonance
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        k0 = -4j * math.pi
        x, xp = (0.3, 0, 0), (0, 0.4, 0)
        ds = np.array([1e-2, 1e-3, 1e-4, 1e-5])
        mags = [abs(resolvent_kernel(c, k0 + d, x, xp).value) for d in ds]
        slope = np.polyfit(np.log(ds), np.log(mags), 1)[0]
        assert slope == pytest.approx(-1.0, abs=0.05)

    def test_singular_at_resonance(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        with pytest.raises(SingularGamma):
            resolvent_kernel(c, -4j * math.pi, (1, 0, 0), (0, 1, 0))

    def test_argument_validation(self):
        c = new_configuration([(0, 0, 0)], alpha=1.0)
        with pytest.raises(PointOnCenter):
            resolvent_kernel(c, 1.0, (0, 0, 0), (1, 0, 0))
        with pytest.raises(CoincidentArguments):
            resolvent_kernel(c, 1.0, (1, 0, 0), (1, 0, 0))


class TestResonanceWidth:
    def test_real_momentum(self):
        assert resonance_width(1.0) == 0.0

    def test_generic(self):
        assert resonance_width(2 - 3j) == pytest.approx(24.0, rel=1e-15)

    def test_purely_imaginary(self):
        assert resonance_width(-4j * math.pi) == 0.0
