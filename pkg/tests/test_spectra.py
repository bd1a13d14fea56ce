"""Tests for flux density spectra and the Robin-vs-mirror comparison."""

import warnings

import numpy as np
import pytest

from robindce.continuous import (
    RampedSinusoidDrive,
    ZeroDrive,
    make_semiopen_far_kernel,
)
from robindce.mirror import (
    AccelerationProfile,
    NegativeAccelerationWarning,
    make_mirror_kernel,
)
from robindce.spectra import (
    FluxConfig,
    compare_spectra,
    default_kbar_grid,
    flux_density,
    flux_spectrum,
    total_photon_number,
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


SMALL = FluxConfig(kbar_points=80, kbar_max=2.0)


class TestBasics:
    def test_zero_drive(self):
        kern = make_semiopen_far_kernel(0.44, 0.0, ZeroDrive(0.0, T_TOTAL))
        spec = flux_spectrum(kern, OMEGA_D, config=SMALL, k_max_hint=10.0 / 0.44)
        assert np.all(spec.n_values == 0.0)
        assert total_photon_number(spec) == 0.0

    def test_grid_validation(self):
        kern = robin_kernel(0.44)
        with pytest.raises(ValueError):
            flux_spectrum(kern, OMEGA_D, config=SMALL, kbar_grid=np.array([0.0, 0.5]))
        with pytest.raises(ValueError):
            flux_spectrum(kern, -1.0, config=SMALL)

    def test_default_grid(self):
        g = default_kbar_grid(FluxConfig())
        assert g.shape == (400,)
        assert g[0] > 0.0 and g[-1] == pytest.approx(2.0)

    def test_nonnegative_and_converged(self):
        spec = flux_spectrum(robin_kernel(0.44), OMEGA_D, config=SMALL,
                             k_max_hint=10.0 / 0.44)
        assert np.all(spec.n_values >= 0.0)
        assert spec.convergence_ratio < SMALL.convergence_threshold
        assert spec.total_N > 0.0

    def test_single_point_density(self):
        n, err = flux_density(robin_kernel(0.44), OMEGA_D, 0.5, config=SMALL,
                              k_max_hint=10.0 / 0.44)
        assert n > 0.0
        assert err < 1e-3 * n


class TestPhysics:
    def test_parabola_peak_near_half(self):
        spec = flux_spectrum(robin_kernel(0.44), OMEGA_D, config=SMALL,
                             k_max_hint=10.0 / 0.44)
        kb = spec.kbar_grid
        sub = (kb > 0.0) & (kb <= 1.0)
        peak = kb[sub][np.argmax(spec.n_values[sub])]
        assert 0.35 < peak < 0.65

    def test_small_lambda_matches_mirror(self):
        robin, mirror = compare_spectra(robin_kernel(0.44), mirror_kernel(0.44),
                                        OMEGA_D, config=SMALL, k_max_hint=10.0 / 0.44)
        kb = robin.kbar_grid
        band = (kb >= 0.1) & (kb <= 0.9)
        dev = np.abs(robin.n_values[band] / mirror.n_values[band] - 1.0)
        assert np.max(dev) <= 0.05

    def test_large_lambda_mirror_dominates(self):
        robin, mirror = compare_spectra(robin_kernel(10.0), mirror_kernel(10.0),
                                        OMEGA_D, config=SMALL, k_max_hint=1.0)
        kb = robin.kbar_grid
        low = (kb > 0.0) & (kb < 1.0)
        assert np.all(mirror.n_values[low] >= robin.n_values[low])
        assert mirror.total_N > robin.total_N
        # decade-binned high-frequency ratio decreasing
        edges = np.geomspace(1.0, 2.0, 4)
        means = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            sel = (kb >= lo) & (kb < hi) & (mirror.n_values > 0.0)
            means.append(np.mean(robin.n_values[sel] / mirror.n_values[sel]))
        assert means[0] > means[1] > means[2]

    def test_epsilon_squared_scaling(self):
        grid = np.linspace(0.1, 1.0, 10)
        full = flux_spectrum(robin_kernel(0.44, eps=EPS), OMEGA_D, config=SMALL,
                             kbar_grid=grid, k_max_hint=10.0 / 0.44)
        half = flux_spectrum(robin_kernel(0.44, eps=EPS / 2.0), OMEGA_D, config=SMALL,
                             kbar_grid=grid, k_max_hint=10.0 / 0.44)
        assert full.total_N / half.total_N == pytest.approx(4.0, rel=0.02)

    def test_high_frequency_suppression_bound(self):
        # the square-root factors bound |B_robin| * sqrt(1 + (k' Lambda)^2)
        # relative to the mirror weight as k' Lambda grows
        Lam = 10.0
        rk = robin_kernel(Lam)
        mk = mirror_kernel(Lam)
        k = 0.5 * OMEGA_D
        ratios = []
        for kp in (1.0, 2.0, 4.0, 8.0):
            br = abs(rk.B_hat(kp, k)) * np.sqrt(1.0 + (kp * Lam) ** 2)
            bm = abs(mk.B_hat(kp, k))
            ratios.append(br / bm)
        assert np.max(ratios) < 10.0 * np.min(ratios)


class TestNumerics:
    def test_thread_determinism(self):
        grid = default_kbar_grid(SMALL)
        one = flux_spectrum(robin_kernel(0.44), OMEGA_D,
                            config=FluxConfig(kbar_points=80, threads=1),
                            kbar_grid=grid, k_max_hint=10.0 / 0.44)
        four = flux_spectrum(robin_kernel(0.44), OMEGA_D,
                             config=FluxConfig(kbar_points=80, threads=4),
                             kbar_grid=grid, k_max_hint=10.0 / 0.44)
        assert one.n_values.tobytes() == four.n_values.tobytes()
        assert one.total_N == four.total_N

    def test_grid_refinement_stability(self):
        coarse = flux_spectrum(robin_kernel(0.44), OMEGA_D,
                               config=FluxConfig(kbar_points=100),
                               k_max_hint=10.0 / 0.44)
        fine = flux_spectrum(robin_kernel(0.44), OMEGA_D,
                             config=FluxConfig(kbar_points=200),
                             k_max_hint=10.0 / 0.44)
        assert abs(fine.total_N - coarse.total_N) < 1e-3 * fine.total_N

    def test_k_max_override(self):
        spec = flux_spectrum(robin_kernel(0.44), OMEGA_D,
                             config=FluxConfig(kbar_points=20, k_max_override=30.0))
        assert spec.k_max_used == 30.0
        assert spec.convergence_ratio == 0.0

    def test_inner_error_small(self):
        spec = flux_spectrum(robin_kernel(0.44), OMEGA_D, config=SMALL,
                             k_max_hint=10.0 / 0.44)
        scale = np.max(spec.n_values)
        assert np.max(spec.inner_quad_error) < 1e-6 * scale
