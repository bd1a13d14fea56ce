"""Bipartite entanglement negativity for continuous-spectrum evolutions.

Two narrow uniform wavepackets centred at distinct frequencies define a
two-mode Gaussian state after the evolution. Its 4x4 covariance matrix
is the identity plus a first-order correction built from the pair
creation kernel B_hat together with the free phases c(k). The negativity
follows from the symplectic spectrum of the partially transposed state
and, at first order, from the closed form N = delta_k |B_hat|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .continuous import FirstOrderKernel

__all__ = [
    "WavepacketPair",
    "GaussianTwoModeState",
    "NegativityScanConfig",
    "covariance_first_order",
    "ptranspose_symplectic_eigs",
    "negativity",
    "negativity_first_order",
    "negativity_scan",
]

_PAULI_Z = np.diag([1.0, -1.0])
_SYMPLECTIC_FORM = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class WavepacketPair:
    """Two uniform wavepackets of width delta_k centred at kp and kp_prime."""

    kp: float
    kp_prime: float
    delta_k: float

    def __post_init__(self):
        if self.delta_k <= 0.0:
            raise ValueError("spectral line-width must be positive")
        if abs(self.kp - self.kp_prime) <= self.delta_k:
            raise ValueError("wavepacket supports must be disjoint")
        if self.kp <= 0.5 * self.delta_k or self.kp_prime <= 0.5 * self.delta_k:
            raise ValueError("packet centres must exceed half the line-width")


@dataclass(frozen=True)
class GaussianTwoModeState:
    """Real symmetric covariance matrix in (x_p, p_p, x_p', p_p') ordering."""

    sigma: np.ndarray
    order: str = "0+1"

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if s.shape != (4, 4):
            raise ValueError("covariance matrix must be 4x4")
        if np.max(np.abs(s - s.T)) > 1e-12:
            raise ValueError("covariance matrix must be symmetric")


def _packet_block_integral(kernel: FirstOrderKernel, center_row: float,
                           center_col: float, delta_k: float,
                           order: int = 16) -> complex:
    """J = int int f(k) f(k') c(k) c(k') B_hat(k, k') dk dk'.

    The uniform packets contribute 1/delta_k; Gauss-Legendre nodes cover
    each packet's support.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * delta_k
    kr = center_row + half * x
    kc = center_col + half * x
    wr = half * w
    B = np.asarray(kernel.B_hat(kr[:, None], kc[None, :]), dtype=complex)
    cr = np.asarray(kernel.phase_prefactor(kr), dtype=complex)
    cc = np.asarray(kernel.phase_prefactor(kc), dtype=complex)
    z = cr[:, None] * cc[None, :] * B
    return complex(wr @ z @ wr) / delta_k


def _s1_block(J: complex) -> np.ndarray:
    """Real symmetric 2x2 first-order block from the complex packet integral.

    Direct expansion of the quadrature kernels gives X^1 = -2 Re z,
    P^1 = +2 Re z and H^1 = +2 Im z with z = c(k) c(k') B_hat(k, k');
    H^1 is symmetric under k <-> k' because B_hat is, which keeps the
    covariance matrix symmetric as its anticommutator definition demands.
    """
    return np.array([
        [-2.0 * J.real, 2.0 * J.imag],
        [2.0 * J.imag, 2.0 * J.real],
    ])


def _check_kernel_conditions(kernel: FirstOrderKernel, pair: WavepacketPair,
                             tol: float = 1e-8) -> None:
    b12 = complex(np.asarray(kernel.B_hat(pair.kp, pair.kp_prime)))
    b21 = complex(np.asarray(kernel.B_hat(pair.kp_prime, pair.kp)))
    scale = max(abs(b12), abs(b21), 1e-300)
    if abs(b12 - b21) > tol * scale and scale > 1e-30:
        raise ValueError("pair creation kernel is not symmetric; the "
                         "covariance construction requires B_hat(k',k) = B_hat(k,k')")


def covariance_first_order(kernel: FirstOrderKernel, pair: WavepacketPair,
                           order: int = 16) -> GaussianTwoModeState:
    """Covariance matrix sigma = I + sigma^1 of the two-packet state.

    The delta part of the evolution contributes the identity; the
    first-order correction integrates the pair creation kernel over each
    packet combination. The off-diagonal block carries the entanglement,
    the diagonal blocks pick up only the off-resonant same-packet
    integrals.
    """
    _check_kernel_conditions(kernel, pair)
    J_a = _packet_block_integral(kernel, pair.kp, pair.kp, pair.delta_k, order)
    J_b = _packet_block_integral(kernel, pair.kp_prime, pair.kp_prime,
                                 pair.delta_k, order)
    J_c = _packet_block_integral(kernel, pair.kp, pair.kp_prime, pair.delta_k, order)
    sigma = np.eye(4)
    sigma[0:2, 0:2] += _s1_block(J_a)
    sigma[2:4, 2:4] += _s1_block(J_b)
    block_c = _s1_block(J_c)
    sigma[0:2, 2:4] += block_c
    sigma[2:4, 0:2] += block_c.T
    asym = np.max(np.abs(sigma - sigma.T))
    if asym > 1e-13:
        raise ValueError(f"covariance asymmetry {asym:.3e} exceeds tolerance")
    sigma = 0.5 * (sigma + sigma.T)
    return GaussianTwoModeState(sigma=sigma)


def ptranspose_symplectic_eigs(state: GaussianTwoModeState) -> tuple[float, float]:
    """Symplectic spectrum of the partially transposed covariance matrix.

    The partial transpose flips the second mode's momentum. The two
    symplectic eigenvalues are the deduplicated absolute eigenvalues of
    Omega sigma-tilde, returned ascending.
    """
    s = np.asarray(state.sigma, dtype=float)
    st = s.copy()
    st[2:4, 2:4] = _PAULI_Z @ s[2:4, 2:4] @ _PAULI_Z
    st[0:2, 2:4] = s[0:2, 2:4] @ _PAULI_Z
    st[2:4, 0:2] = st[0:2, 2:4].T
    eigs = np.linalg.eigvals(_SYMPLECTIC_FORM @ st)
    mags = np.sort(np.abs(eigs))
    nu_minus = 0.5 * (mags[0] + mags[1])
    nu_plus = 0.5 * (mags[2] + mags[3])
    return float(nu_minus), float(nu_plus)


def negativity(state: GaussianTwoModeState) -> float:
    """N = max(0, (1 - nu_s) / (2 nu_s)) from the smallest symplectic value."""
    nu_s, _ = ptranspose_symplectic_eigs(state)
    return max(0.0, (1.0 - nu_s) / (2.0 * nu_s))


def negativity_first_order(kernel: FirstOrderKernel, pair: WavepacketPair) -> float:
    """Closed form N = delta_k |B_hat(kp, kp')| for sharply peaked packets."""
    _check_kernel_conditions(kernel, pair)
    b = complex(np.asarray(kernel.B_hat(pair.kp, pair.kp_prime)))
    return pair.delta_k * abs(b)


@dataclass(frozen=True)
class NegativityScanConfig:
    """Scan over detuning for the two-packet negativity curves.

    The packet centres are omega_d/2 +- delta_omega; the scan runs from
    the disjoint-support threshold delta_k up to max_fraction * omega_d.
    """

    omega_d: float
    delta_k: Optional[float] = None
    n_points: int = 80
    max_fraction: float = 0.4

    def resolved_delta_k(self) -> float:
        return self.delta_k if self.delta_k is not None else self.omega_d / 200.0

    def detuning_grid(self) -> np.ndarray:
        dk = self.resolved_delta_k()
        lo = dk
        hi = self.max_fraction * self.omega_d
        if hi <= lo:
            raise ValueError("scan range is empty for this line-width")
        return np.linspace(lo, hi, self.n_points)


def negativity_scan(robin_kernel: FirstOrderKernel, mirror_kernel: FirstOrderKernel,
                    config: NegativityScanConfig):
    """Paired |B_hat| and negativity curves over the detuning grid.

    Rows are (delta_omega / omega_d, |B_robin|, |B_mirror|, N_robin,
    N_mirror) with the closed-form first-order negativity.
    """
    dk = config.resolved_delta_k()
    rows = []
    for dw in config.detuning_grid():
        kp = 0.5 * config.omega_d + dw
        kpp = 0.5 * config.omega_d - dw
        if kpp <= 0.5 * dk:
            continue
        WavepacketPair(kp=kp, kp_prime=kpp, delta_k=dk)
        br = abs(complex(np.asarray(robin_kernel.B_hat(kp, kpp))))
        bm = abs(complex(np.asarray(mirror_kernel.B_hat(kp, kpp))))
        rows.append((dw / config.omega_d, br, bm, dk * br, dk * bm))
    return rows
