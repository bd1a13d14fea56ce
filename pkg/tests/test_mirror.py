"""Tests for the moving-mirror Bogoliubov machinery."""

import math
import warnings

import numpy as np
import pytest

from robindce.continuous import SinusoidDrive, ZeroDrive, drive_integral, semiopen_far_kernel
from robindce.mirror import (
    AccelerationProfile,
    NegativeAccelerationWarning,
    make_mirror_kernel,
    mirror_small_a,
    moving_mirror_kernel,
    uniform_mirror_exact,
)


class TestAccelerationProfile:
    def test_constant_profile(self):
        p = AccelerationProfile.constant(0.03, 0.0, 5.0)
        assert p.nonneg
        assert p(2.5) == pytest.approx(0.03, rel=1e-14)
        assert p.integral(0.0) == pytest.approx(0.15, rel=1e-13)

    def test_from_second_derivative(self):
        # eta = eps sin(w t) gives a = -L eta'' = L eps w^2 sin(w t)
        eps, w, Lam = 0.25, 0.155, 0.44
        drive = SinusoidDrive(eps, w, 0.0, 40.5)
        a = AccelerationProfile.from_drive_second_derivative(drive, -Lam)
        t = 7.3
        assert np.real(a(t)) == pytest.approx(
            Lam * eps * w * w * math.sin(w * t), rel=1e-12
        )
        # sign-oscillating acceleration is flagged
        assert not a.nonneg

    def test_negative_constant_flagged(self):
        p = AccelerationProfile.constant(-0.01, 0.0, 1.0)
        assert not p.nonneg


class TestSmallA:
    def test_zero_acceleration(self):
        al, be = mirror_small_a(2.0, 1.0, 0.0)
        assert al == 0.0 and be == 0.0

    def test_equal_momenta_beta(self):
        al, be = mirror_small_a(1.0, 1.0, 0.01)
        assert al is None
        assert be == pytest.approx(0.01 / (8.0 * math.pi), rel=1e-14)

    def test_offdiagonal_alpha_weight(self):
        a = 0.005
        al, _ = mirror_small_a(2.0, 1.0, a)
        G1 = math.sqrt(2.0) / (math.pi * (1.0 - 2.0) ** 3)
        assert al == pytest.approx(a * G1, rel=1e-14)


class TestUniformMirrorExact:
    def test_beta_small_a_convergence(self):
        # normalized residual |beta - a/(8 pi)|/a drops >= 3x per halving
        resids = []
        for a in (0.04, 0.02, 0.01):
            res = uniform_mirror_exact(1.0, 1.0, a)
            ref = a / (8.0 * math.pi)
            resids.append(abs(res.beta - ref) / a)
        assert resids[0] / resids[1] >= 3.0
        assert resids[1] / resids[2] >= 3.0

    def test_alpha_matches_G1(self):
        # small enough a that the physical O(a^3) correction sits below the
        # declared quadrature error, which scales like 1/a via the prefactor
        a = 2e-4
        res = uniform_mirror_exact(1.0, 2.0, a)
        ref, _ = mirror_small_a(1.0, 2.0, a)
        assert abs(res.alpha - ref) <= res.alpha_error

    def test_alpha_gap_is_cubic(self):
        # the exact-vs-leading-order gap shrinks ~8x per halving of a,
        # confirming it is the next physical term and not a numerical artifact
        gaps = []
        for a in (0.02, 0.01):
            res = uniform_mirror_exact(1.0, 2.0, a)
            ref, _ = mirror_small_a(1.0, 2.0, a)
            gaps.append(abs(res.alpha - ref))
        assert 5.0 < gaps[0] / gaps[1] < 12.0

    def test_beta_error_is_honest(self):
        a = 0.005
        res = uniform_mirror_exact(1.0, 1.0, a)
        ref = a / (8.0 * math.pi)
        # the declared error covers the numerical error; the physical O(a^3)
        # truncation of the small-a formula is below it at this a
        assert abs(res.beta - ref) <= res.beta_error + 30.0 * a**3

    def test_beta_swap_symmetry(self):
        # beta is symmetric in (k', k) at leading order; alpha is not
        # compared under swap because k' > k puts a stationary point inside
        # the integration range and the small-a limit no longer applies
        a = 0.01
        r12 = uniform_mirror_exact(1.0, 2.0, a)
        r21 = uniform_mirror_exact(2.0, 1.0, a)
        assert r12.beta / r21.beta == pytest.approx(1.0, rel=1e-3)

    @pytest.mark.parametrize("pair", [(0.5, 2.0), (1.3, 0.7), (1.0, 1.0)])
    def test_regulator_independence(self, pair):
        kp, k = pair
        a = 0.1
        r1 = uniform_mirror_exact(kp, k, a)
        r2 = uniform_mirror_exact(kp, k, a, epsilon_reg=0.5e-3 * k)
        assert abs(r2.beta - r1.beta) < 1e-6 * abs(r1.beta)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            uniform_mirror_exact(1.0, 1.0, -0.1)
        with pytest.raises(ValueError):
            uniform_mirror_exact(-1.0, 1.0, 0.1)


class TestMovingMirrorKernel:
    def test_zero_acceleration_identity(self):
        z = AccelerationProfile.from_profile(ZeroDrive(0.0, 5.0))
        A, B = moving_mirror_kernel(2.0, 1.0, z)
        assert A == 0.0 and B == 0.0

    def test_constant_acceleration_closed_form(self):
        a0, T = 0.02, 6.0
        p = AccelerationProfile.constant(a0, 0.0, T)
        kp, k = 0.8, 1.7
        Om = kp + k
        elementary = a0 * (np.exp(-1j * Om * T) - 1.0) / (-1j * Om)
        _, B = moving_mirror_kernel(kp, k, p)
        assert B == pytest.approx(
            1j * math.sqrt(k * kp) / (math.pi * Om * Om) * elementary, rel=1e-12
        )

    def test_negative_acceleration_warns(self):
        drive = SinusoidDrive(0.25, 0.155, 0.0, 40.5)
        a = AccelerationProfile.from_drive_second_derivative(drive, -0.44)
        with pytest.warns(NegativeAccelerationWarning):
            moving_mirror_kernel(0.3, 0.5, a)

    def test_diagonal_A_not_evaluated(self):
        p = AccelerationProfile.constant(0.02, 0.0, 6.0)
        A, B = moving_mirror_kernel(1.0, 1.0, p)
        assert np.isnan(A.real)
        assert np.isfinite(B)

    def test_symmetry_identities(self):
        p = AccelerationProfile.constant(0.02, 0.0, 6.0)
        for kp, k in [(0.5, 2.0), (1.3, 0.7), (0.9, 1.8)]:
            A1, B1 = moving_mirror_kernel(kp, k, p)
            A2, B2 = moving_mirror_kernel(k, kp, p)
            assert abs(B1 - B2) < 1e-10
            assert abs(A1 + np.conj(A2)) < 1e-10

    def test_low_frequency_matching_to_robin(self):
        # matched sinusoidal drives: the mirror and Robin B-hat agree at
        # k Lambda, k' Lambda << 1 within 2%
        from robindce.continuous import RampedSinusoidDrive

        eps, w, T, Lam = 0.25, 0.155, 40.5, 0.44
        drive = RampedSinusoidDrive(eps, w, 0.0, T, ramp=4.05)
        accel = AccelerationProfile.from_drive_second_derivative(drive, -Lam)
        kp, k = 0.05 / Lam * 0.5, 0.05 / Lam
        _, B_robin = semiopen_far_kernel(kp, k, Lam, 0.0, drive)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NegativeAccelerationWarning)
            _, B_mirror = moving_mirror_kernel(kp, k, accel)
        assert abs(B_robin / B_mirror - 1.0) < 0.02

    def test_kernel_builder_phase(self):
        p = AccelerationProfile.constant(0.02, 1.0, 6.0)
        kern = make_mirror_kernel(p)
        assert kern.regime == "mirror"
        assert kern.phase_prefactor(0.7) == pytest.approx(np.exp(1j * 0.7 * 5.0), rel=1e-14)
