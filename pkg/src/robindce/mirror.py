"""Exact and perturbative Bogoliubov data for moving Dirichlet boundaries.

Includes the uniformly accelerated mirror's exact oscillatory integrals with
their regulator prescription, the small-acceleration expansion, and the
first-order kernel for an arbitrary acceleration profile parameterized by
proper time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .continuous import DriveProfile, FirstOrderKernel, PwExp, _PwExpDrive

__all__ = [
    "AccelerationProfile",
    "MirrorExactResult",
    "NegativeAccelerationWarning",
    "uniform_mirror_exact",
    "mirror_small_a",
    "moving_mirror_kernel",
    "make_mirror_kernel",
]


class NegativeAccelerationWarning(UserWarning):
    """The first-order mirror theory assumes a non-negative acceleration."""


@dataclass(frozen=True)
class AccelerationProfile:
    """Proper acceleration a(tau) on the window [tau0, tauf].

    Wraps a drive-profile representation so the windowed oscillatory
    integrals stay exact whenever the underlying drive is analytic.
    """

    profile: DriveProfile
    nonneg: bool

    @property
    def tau0(self) -> float:
        return self.profile.t0

    @property
    def tauf(self) -> float:
        return self.profile.tf

    def __call__(self, tau):
        return self.profile(tau)

    def integral(self, Omega):
        return self.profile.integral(Omega)

    @staticmethod
    def _check_nonneg(profile: DriveProfile) -> bool:
        taus = np.linspace(profile.t0, profile.tf, 4001)
        vals = np.real(profile(taus))
        scale = float(np.max(np.abs(vals))) or 1.0
        return bool(np.min(vals) >= -1e-12 * scale)

    @classmethod
    def from_profile(cls, profile: DriveProfile) -> "AccelerationProfile":
        return cls(profile=profile, nonneg=cls._check_nonneg(profile))

    @classmethod
    def from_drive_second_derivative(cls, drive: _PwExpDrive, scale: float) -> "AccelerationProfile":
        """a(tau) = scale * d^2(drive)/dt^2, exact for exponential-piece drives.

        The matching rules are scale = -Lambda for the semiopen far regime,
        scale = L for the rigid cavity, and scale = 1 for b(t) drives.
        """
        prof = drive.second_derivative().scaled(scale)
        return cls.from_profile(prof)

    @classmethod
    def constant(cls, a0: float, tau0: float, tauf: float) -> "AccelerationProfile":
        prof = _PwExpDrive(t0=tau0, tf=tauf, pwexp=PwExp(((0.0, tauf - tau0, [(a0, 0.0)]),)))
        return cls(profile=prof, nonneg=a0 >= 0.0)


@dataclass(frozen=True)
class MirrorExactResult:
    """Regulated exact coefficients with declared error estimates."""

    alpha: float
    beta: float
    alpha_error: float
    beta_error: float
    epsilon_reg: float


def _mirror_integral(kp: float, k: float, a: float, eps: float, sign: int,
                     panels_per_osc: float, order: int) -> complex:
    """int_1^ymax y^(sign*i*kp/a - 1) e^{i (k + i eps)(y-1)/a} dy.

    The regulator damps the tail; the truncation point keeps the neglected
    tail below 1e-12 of the damping envelope.
    """
    ymax = 1.0 + 27.631 * a / eps
    total_phase = (k + kp) * (ymax - 1.0) / a
    npan = max(50, int(panels_per_osc * total_phase / (2.0 * math.pi)) + 8)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(1.0, ymax, npan + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    y = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    f = np.exp((sign * 1j * kp / a - 1.0) * np.log(y) + (1j * (k + 1j * eps) / a) * (y - 1.0))
    return complex(np.sum(ww * f))


def _extrapolated(kp: float, k: float, a: float, eps: float, sign: int,
                  ppo: float, order: int) -> tuple[float, float]:
    """Regulator-extrapolated Re-integral value and its extrapolation error.

    The finite regulator biases the integral linearly in eps; evaluating at
    eps, eps/2, eps/4 and eliminating the linear and quadratic terms leaves a
    residual O(eps^3).
    """
    v1 = _mirror_integral(kp, k, a, eps, sign, ppo, order).real
    v2 = _mirror_integral(kp, k, a, eps / 2.0, sign, ppo, order).real
    v4 = _mirror_integral(kp, k, a, eps / 4.0, sign, ppo, order).real
    v_lin = 2.0 * v4 - v2
    v_quad = (8.0 * v4 - 6.0 * v2 + v1) / 3.0
    return v_quad, abs(v_quad - v_lin)


def uniform_mirror_exact(k_prime: float, k: float, a: float,
                         epsilon_reg: Optional[float] = None,
                         panels_per_osc: float = 2.0,
                         order: int = 12) -> MirrorExactResult:
    """Exact coefficients of the uniformly accelerated mirror.

    alpha uses the y^{-i k'/a} branch and beta the y^{+i k'/a} branch of the
    oscillatory integral; both are regulated by k -> k + i eps and the
    regulator bias is removed by extrapolation in eps. The declared errors
    combine the extrapolation residual with a quadrature refinement check.
    """
    if k_prime <= 0.0 or k <= 0.0:
        raise ValueError("wavenumbers must be positive")
    if a <= 0.0:
        raise ValueError("acceleration must be positive")
    eps = epsilon_reg if epsilon_reg is not None else 1e-3 * k
    pref = (1.0 / (math.pi * a)) * math.sqrt(k_prime / k)
    out = {}
    for name, sign in (("alpha", -1), ("beta", +1)):
        v, e_reg = _extrapolated(k_prime, k, a, eps, sign, panels_per_osc, order)
        v_ref, _ = _extrapolated(k_prime, k, a, eps, sign, 1.5 * panels_per_osc, order + 4)
        out[name] = pref * v
        out[name + "_error"] = pref * (e_reg + abs(v - v_ref))
    return MirrorExactResult(
        alpha=out["alpha"],
        beta=out["beta"],
        alpha_error=out["alpha_error"],
        beta_error=out["beta_error"],
        epsilon_reg=eps,
    )


def mirror_small_a(k_prime: float, k: float, a: float):
    """Leading small-acceleration coefficients.

    Returns (alpha_offdiag, beta). The off-diagonal alpha carries the
    principal-value-like weight G1 = sqrt(k k')/(pi (k - k')^3); at exact
    coincidence it is distributional and returned as None. The next
    correction G2 vanishes off-diagonal.
    """
    if k_prime <= 0.0 or k <= 0.0:
        raise ValueError("wavenumbers must be positive")
    beta = a * math.sqrt(k_prime * k) / (math.pi * (k + k_prime) ** 3)
    if k_prime == k:
        return None, beta
    g1 = math.sqrt(k * k_prime) / (math.pi * (k - k_prime) ** 3)
    return a * g1, beta


def moving_mirror_kernel(k_prime, k, profile: AccelerationProfile):
    """(A_hat, B_hat) for an arbitrary proper-acceleration profile.

    Broadcasts over arrays. The distributional A_hat diagonal is not
    evaluated: entries with k = k' come back as NaN so accidental sampling
    is visible downstream.
    """
    if not profile.nonneg:
        warnings.warn(
            "acceleration profile takes negative values; the first-order "
            "mirror kernels are derived assuming a(tau) >= 0",
            NegativeAccelerationWarning,
            stacklevel=2,
        )
    kp = np.asarray(k_prime, dtype=float)
    k = np.asarray(k, dtype=float)
    diff = kp - k
    denom = np.where(diff == 0.0, 1.0, diff)
    A = -1j * np.sqrt(k * kp) / (np.pi * denom**2) * profile.integral(diff)
    A = np.where(diff == 0.0, np.nan + 0.0j, A)
    B = 1j * np.sqrt(k * kp) / (np.pi * (kp + k) ** 2) * profile.integral(kp + k)
    if np.ndim(k_prime) == 0 and np.ndim(k) == 0:
        return complex(A), complex(B)
    return A, B


def make_mirror_kernel(profile: AccelerationProfile) -> FirstOrderKernel:
    T = profile.tauf - profile.tau0
    return FirstOrderKernel(
        regime="mirror",
        A_hat=lambda kp, k: moving_mirror_kernel(kp, k, profile)[0],
        B_hat=lambda kp, k: moving_mirror_kernel(kp, k, profile)[1],
        phase_prefactor=lambda kp: np.exp(1j * np.asarray(kp, dtype=float) * T),
        t0=profile.tau0,
        tf=profile.tauf,
    )
