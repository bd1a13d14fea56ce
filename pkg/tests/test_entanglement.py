"""Tests for the two-packet covariance matrix and negativity."""

import math
import warnings

import numpy as np
import pytest

from robindce.continuous import (
    FirstOrderKernel,
    RampedSinusoidDrive,
    ZeroDrive,
    make_semiopen_far_kernel,
)
from robindce.entanglement import (
    GaussianTwoModeState,
    NegativityScanConfig,
    WavepacketPair,
    covariance_first_order,
    negativity,
    negativity_first_order,
    negativity_scan,
    ptranspose_symplectic_eigs,
)
from robindce.mirror import (
    AccelerationProfile,
    NegativeAccelerationWarning,
    make_mirror_kernel,
)

EPS = 0.25
OMEGA_D = 0.155
T_TOTAL = 40.5
RAMP = 4.05

warnings.simplefilter("ignore", NegativeAccelerationWarning)


def robin_kernel(Lam, eps=EPS):
    drive = RampedSinusoidDrive(eps, OMEGA_D, 0.0, T_TOTAL, RAMP)
    return make_semiopen_far_kernel(Lam, 0.0, drive)


def mirror_kernel(Lam, eps=EPS):
    drive = RampedSinusoidDrive(eps, OMEGA_D, 0.0, T_TOTAL, RAMP)
    accel = AccelerationProfile.from_drive_second_derivative(drive, -Lam)
    return make_mirror_kernel(accel)


def fig2_pair(detuning_fraction=0.1, delta_k=OMEGA_D / 200.0):
    dw = detuning_fraction * OMEGA_D
    return WavepacketPair(kp=0.5 * OMEGA_D + dw, kp_prime=0.5 * OMEGA_D - dw,
                          delta_k=delta_k)


def constant_kernel(b, phase_slope=0.0):
    """Synthetic symmetric kernel with constant B_hat for oracle checks."""
    return FirstOrderKernel(
        regime="synthetic",
        A_hat=lambda kp, k: np.zeros(np.broadcast(kp, k).shape, dtype=complex),
        B_hat=lambda kp, k: np.full(np.broadcast(kp, k).shape, b, dtype=complex),
        phase_prefactor=lambda k: np.exp(1j * phase_slope * np.asarray(k, dtype=float)),
        t0=0.0,
        tf=1.0,
    )


class TestWavepacketPair:
    def test_valid(self):
        p = WavepacketPair(kp=1.0, kp_prime=2.0, delta_k=0.1)
        assert p.delta_k == 0.1

    def test_overlapping_supports_rejected(self):
        with pytest.raises(ValueError):
            WavepacketPair(kp=1.0, kp_prime=1.05, delta_k=0.1)

    def test_nonpositive_width_rejected(self):
        with pytest.raises(ValueError):
            WavepacketPair(kp=1.0, kp_prime=2.0, delta_k=0.0)

    def test_center_below_halfwidth_rejected(self):
        with pytest.raises(ValueError):
            WavepacketPair(kp=0.04, kp_prime=2.0, delta_k=0.1)


class TestCovariance:
    def test_vacuum_is_identity(self):
        kern = make_semiopen_far_kernel(0.44, 0.0, ZeroDrive(0.0, T_TOTAL))
        state = covariance_first_order(kern, fig2_pair())
        assert np.allclose(state.sigma, np.eye(4), atol=1e-15)

    def test_symmetric_and_real(self):
        state = covariance_first_order(robin_kernel(0.44), fig2_pair())
        s = state.sigma
        assert np.max(np.abs(s - s.T)) < 1e-13
        assert s.dtype == np.float64

    def test_asymmetric_kernel_rejected(self):
        bad = FirstOrderKernel(
            regime="bad",
            A_hat=lambda kp, k: 0.0,
            B_hat=lambda kp, k: np.asarray(kp) * 1.0 + 0.0 * np.asarray(k),
            phase_prefactor=lambda k: np.ones_like(np.asarray(k, dtype=complex)),
            t0=0.0,
            tf=1.0,
        )
        with pytest.raises(ValueError):
            covariance_first_order(bad, fig2_pair())

    def test_offdiagonal_block_norm(self):
        # spectral norm of the coupling block is 2 delta_k |B_hat| up to
        # packet-averaging corrections of relative order (delta_k/scale)^2
        kern = robin_kernel(0.44)
        pair = fig2_pair()
        state = covariance_first_order(kern, pair)
        block = state.sigma[0:2, 2:4]
        b = abs(complex(np.asarray(kern.B_hat(pair.kp, pair.kp_prime))))
        assert np.linalg.norm(block, 2) == pytest.approx(2.0 * pair.delta_k * b,
                                                         rel=1e-3)

    def test_diagonal_blocks_near_identity(self):
        # same-packet integrals sample B_hat off the drive resonance
        state = covariance_first_order(robin_kernel(0.44), fig2_pair(0.3))
        off = np.linalg.norm(state.sigma[0:2, 2:4], 2)
        da = np.linalg.norm(state.sigma[0:2, 0:2] - np.eye(2), 2)
        db = np.linalg.norm(state.sigma[2:4, 2:4] - np.eye(2), 2)
        assert da < off and db < off

    def test_bad_sigma_rejected(self):
        with pytest.raises(ValueError):
            GaussianTwoModeState(sigma=np.arange(16.0).reshape(4, 4))
        with pytest.raises(ValueError):
            GaussianTwoModeState(sigma=np.eye(3))


class TestSymplectic:
    def test_vacuum_eigs(self):
        state = GaussianTwoModeState(sigma=np.eye(4))
        assert ptranspose_symplectic_eigs(state) == (1.0, 1.0)
        assert negativity(state) == 0.0

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_closed_form_eigs_random_small_B(self, seed):
        rng = np.random.default_rng(seed)
        b = 1e-6 * (rng.standard_normal() + 1j * rng.standard_normal())
        kern = constant_kernel(b, phase_slope=0.4)
        pair = WavepacketPair(kp=1.0, kp_prime=2.0, delta_k=0.01)
        state = covariance_first_order(kern, pair)
        nu_m, nu_p = ptranspose_symplectic_eigs(state)
        # I = |J|^2 with J the packet integral of c c B_hat
        from robindce.entanglement import _packet_block_integral
        J = _packet_block_integral(kern, pair.kp, pair.kp_prime, pair.delta_k)
        assert nu_m == pytest.approx(abs(1.0 - 2.0 * abs(J)), abs=1e-10)
        assert nu_p == pytest.approx(abs(1.0 + 2.0 * abs(J)), abs=1e-10)

    def test_negativity_positive_when_entangled(self):
        state = covariance_first_order(robin_kernel(0.44), fig2_pair())
        assert negativity(state) > 0.0


class TestClosedFormVsSymplectic:
    def test_residual_shrinks_quadratically(self):
        # narrow packets keep the packet-averaging term (linear in epsilon,
        # cubic in delta_k) below the quadratic residual being measured
        pair = fig2_pair(0.1, OMEGA_D / 4000.0)
        resid = []
        for eps in (EPS, EPS / 2.0):
            kern = robin_kernel(0.44, eps=eps)
            n_closed = negativity_first_order(kern, pair)
            n_sym = negativity(covariance_first_order(kern, pair))
            resid.append(abs(n_sym - n_closed))
        assert resid[0] / resid[1] == pytest.approx(4.0, rel=0.35)

    def test_phase_invariance(self):
        kern = robin_kernel(0.44)
        pair = fig2_pair()
        n_ref = negativity(covariance_first_order(kern, pair))
        shifted = FirstOrderKernel(
            regime=kern.regime,
            A_hat=kern.A_hat,
            B_hat=kern.B_hat,
            phase_prefactor=lambda k: np.exp(1j * 0.713) * kern.phase_prefactor(k),
            t0=kern.t0,
            tf=kern.tf,
        )
        n_shift = negativity(covariance_first_order(shifted, pair))
        assert abs(n_shift - n_ref) < 1e-12


class TestScan:
    def test_fig2_small_lambda_agreement(self):
        cfg = NegativityScanConfig(omega_d=OMEGA_D, n_points=40)
        rows = negativity_scan(robin_kernel(0.44), mirror_kernel(0.44), cfg)
        assert len(rows) > 30
        devs = [abs(r[1] / r[2] - 1.0) for r in rows]
        assert max(devs) <= 0.05

    def test_fig2_large_lambda_mirror_dominates(self):
        cfg = NegativityScanConfig(omega_d=OMEGA_D, n_points=40)
        rows = negativity_scan(robin_kernel(10.0), mirror_kernel(10.0), cfg)
        assert all(r[2] >= r[1] for r in rows)

    def test_epsilon_linearity(self):
        cfg = NegativityScanConfig(omega_d=OMEGA_D, n_points=10)
        full = negativity_scan(robin_kernel(0.44, eps=EPS),
                               mirror_kernel(0.44, eps=EPS), cfg)
        half = negativity_scan(robin_kernel(0.44, eps=EPS / 2.0),
                               mirror_kernel(0.44, eps=EPS / 2.0), cfg)
        for rf, rh in zip(full, half):
            assert rf[1] / rh[1] == pytest.approx(2.0, rel=0.01)

    def test_negativity_column_is_scaled_bhat(self):
        cfg = NegativityScanConfig(omega_d=OMEGA_D, n_points=5)
        dk = cfg.resolved_delta_k()
        rows = negativity_scan(robin_kernel(0.44), mirror_kernel(0.44), cfg)
        for r in rows:
            assert r[3] == pytest.approx(dk * r[1], rel=1e-14)
            assert r[4] == pytest.approx(dk * r[2], rel=1e-14)

    def test_empty_range_rejected(self):
        cfg = NegativityScanConfig(omega_d=OMEGA_D, delta_k=0.5 * OMEGA_D)
        with pytest.raises(ValueError):
            cfg.detuning_grid()
