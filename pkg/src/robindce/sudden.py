"""Bogoliubov coefficients for an instantaneous change of the Robin parameter(s).

Covers the exact semiopen formula for an arbitrary admissible jump, its
perturbative expansions far from and near the Dirichlet point, and the
first- and second-order discrete matrices for the cavity. Alpha carries a
distributional part: a delta coefficient plus a principal-value kernel with
a structurally recorded singularity at equal frequencies, never evaluated
as a raw pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.special import digamma

from .modes import CavityModeTable, RobinParameter

__all__ = [
    "AlphaSample",
    "PrincipalValuePart",
    "DeltaPlusKernel",
    "DiscreteBogoliubovMatrix",
    "UnsupportedOrderError",
    "semiopen_sudden_exact",
    "semiopen_sudden_far",
    "semiopen_sudden_near_dirichlet",
    "cavity_sudden_far",
    "cavity_frequency_shift_far",
    "cavity_sudden_near_dirichlet",
    "cavity_frequency_shift_near_dirichlet",
    "cavity_near_dirichlet_matrices",
    "cavity_near_dirichlet_quadratic_tail",
]


class UnsupportedOrderError(ValueError):
    """Requested perturbative order is not available for the regime."""


@dataclass(frozen=True)
class AlphaSample:
    """Pointwise sample of a distributional alpha: delta coefficient at k=k'
    plus the coefficient of the principal-value factor P(1/(omega - omega'))."""

    delta_coeff: float
    pv_coefficient: float


@dataclass(frozen=True)
class PrincipalValuePart:
    """Kernel with a declared 1/(omega - omega') principal-value singularity.

    The singularity is carried structurally: ``coefficient`` is the smooth
    factor multiplying P(1/(omega - omega')), and integration against a test
    function uses symmetric-interval subtraction around the singular point.
    """

    coefficient: Callable
    mu: float = 0.0

    def integrate_against(self, f: Callable, k_grid: np.ndarray, k_prime: float,
                          window_cells: int = 10) -> float:
        """PV integral over the grid of coefficient(k', k) f(k) / (omega - omega').

        Rewrites 1/(omega - omega') as (omega + omega')/((k - k')(k + k')) so the
        pole sits at k = k', then subtracts the pole value over a symmetric
        window of ``window_cells`` grid cells on each side and integrates the
        smooth remainder by the trapezoid rule.
        """
        k = np.asarray(k_grid, dtype=float)
        h = k[1] - k[0]
        w = np.sqrt(k * k + self.mu * self.mu)
        wp = math.sqrt(k_prime * k_prime + self.mu * self.mu)
        g = self.coefficient(k_prime, k) * f(k) * (w + wp) / (k + k_prime)

        def g_at(x: float) -> float:
            wx = math.sqrt(x * x + self.mu * self.mu)
            return float(self.coefficient(k_prime, np.asarray(x)) * f(np.asarray(x)) * (wx + wp) / (x + k_prime))

        gp = g_at(k_prime)
        j0 = int(np.argmin(np.abs(k - k_prime)))
        jlo = max(0, j0 - window_cells)
        jhi = min(len(k) - 1, j0 + window_cells)
        # smooth remainder over the window nodes
        kw = k[jlo : jhi + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            sub = (g[jlo : jhi + 1] - gp) / (kw - k_prime)
        near = np.abs(kw - k_prime) < 1e-9 * h
        if near.any():
            # at an exact grid hit, replace the 0/0 quotient by a central difference
            sub[near] = (g_at(k_prime + h) - g_at(k_prime - h)) / (2.0 * h)
        total = float(np.trapezoid(sub, kw))
        lo, hi = k[jlo], k[jhi]
        if lo < k_prime < hi:
            total += gp * math.log((hi - k_prime) / (k_prime - lo))
        # plain quotient outside the window
        if jlo > 0:
            left = g[: jlo + 1] / (k[: jlo + 1] - k_prime)
            total += float(np.trapezoid(left, k[: jlo + 1]))
        if jhi < len(k) - 1:
            right = g[jhi:] / (k[jhi:] - k_prime)
            total += float(np.trapezoid(right, k[jhi:]))
        return float(total)


@dataclass(frozen=True)
class DeltaPlusKernel:
    """Distributional alpha kernel: delta part, smooth part, optional pv part."""

    delta_coeff: Callable
    smooth: Callable = field(default=lambda kp, k: np.zeros(np.broadcast(kp, k).shape))
    pv_part: Optional[PrincipalValuePart] = None


@dataclass(frozen=True)
class DiscreteBogoliubovMatrix:
    """Truncated Bogoliubov matrices for discrete (cavity) spectra."""

    regime: str
    order: int
    labels: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        if self.alpha.shape != (n, n) or self.beta.shape != (n, n):
            raise ValueError("matrix shapes must match the label count")
        if not (np.isfinite(self.alpha).all() and np.isfinite(self.beta).all()):
            raise ValueError("matrix entries must be finite")

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def to_rows(self):
        """Rows (regime, m, n, Re alpha, Im alpha, Re beta, Im beta, order)."""
        for i, li in enumerate(self.labels):
            for j, lj in enumerate(self.labels):
                a, b = complex(self.alpha[i, j]), complex(self.beta[i, j])
                yield (self.regime, li, lj, a.real, a.imag, b.real, b.imag, self.order)


def _omega(k, mu: float):
    k = np.asarray(k, dtype=float)
    return np.sqrt(k * k + mu * mu)


def _sin_delta(k, D: RobinParameter):
    """sin of the Robin phase shift atan(-kD)."""
    if D.infinite:
        return np.ones(np.shape(k)) if np.ndim(k) else 1.0
    k = np.asarray(k, dtype=float)
    return -k * D.value / np.sqrt(1.0 + (k * D.value) ** 2)


def _cos_delta(k, D: RobinParameter):
    if D.infinite:
        return np.zeros(np.shape(k)) if np.ndim(k) else 0.0
    k = np.asarray(k, dtype=float)
    return 1.0 / np.sqrt(1.0 + (k * D.value) ** 2)


def _sin_delta_over_D(k, D: RobinParameter):
    """sin(delta)/D with the D -> 0 limit -k cos(delta) -> -k taken algebraically."""
    if D.infinite:
        return np.zeros(np.shape(k)) if np.ndim(k) else 0.0
    k = np.asarray(k, dtype=float)
    if D.value == 0.0:
        return -k
    return -k / np.sqrt(1.0 + (k * D.value) ** 2)


def semiopen_sudden_exact(k_prime, k, D: RobinParameter, D_prime: RobinParameter,
                          mu: float = 0.0):
    """Exact sudden-change coefficients for the semiopen geometry.

    Returns (AlphaSample, beta). The alpha sample holds the delta coefficient
    cos(delta - delta') evaluated at coincidence and the coefficient of the
    principal-value factor; beta is the regular pair-creation amplitude.
    """
    for R in (D, D_prime):
        if not (R.is_admissible(mu) or (not R.infinite and R.value == 0.0)):
            raise ValueError("Robin parameter not stability-admissible")
    kp = float(k_prime)
    k = float(k)
    if kp <= 0.0 or k <= 0.0:
        raise ValueError("wavenumbers must be positive")
    w, wp = float(_omega(k, mu)), float(_omega(kp, mu))
    # numerator sin d sin d' (1/D' - 1/D) with the 1/D poles cancelled
    # against the corresponding sin factors before division
    W = float(_sin_delta(k, D)) * float(_sin_delta_over_D(kp, D_prime)) - float(
        _sin_delta(kp, D_prime)
    ) * float(_sin_delta_over_D(k, D))
    pv_coeff = W / (math.pi * math.sqrt(w * wp))
    beta = pv_coeff / (w + wp)
    cosdiff = float(_cos_delta(k, D)) * float(_cos_delta(k, D_prime)) + float(
        _sin_delta(k, D)
    ) * float(_sin_delta(k, D_prime))
    return AlphaSample(delta_coeff=cosdiff, pv_coefficient=pv_coeff), beta


def semiopen_sudden_far(k_prime, k, Lambda: float, eta: float, mu: float = 0.0,
                        order: int = 1):
    """Perturbative sudden coefficients far from Dirichlet, D: -L -> -L(1+eta)."""
    if Lambda <= 0.0:
        raise ValueError("Lambda must be positive")
    if order not in (1, 2):
        raise UnsupportedOrderError("order must be 1 or 2")
    kp, k = float(k_prime), float(k)
    w, wp = float(_omega(k, mu)), float(_omega(kp, mu))
    ak, ap = k * Lambda, kp * Lambda
    pref = eta * Lambda * k * kp / (
        math.pi * math.sqrt(w * wp) * math.sqrt(1.0 + ak * ak) * math.sqrt(1.0 + ap * ap)
    )
    bracket = 1.0
    delta_coeff = 1.0
    if order == 2:
        bracket = 1.0 - eta * ap * ap / (1.0 + ap * ap)
        delta_coeff = 1.0 - eta * eta * ak * ak / (2.0 * (1.0 + ak * ak) ** 2)
    pv_coeff = pref * bracket
    beta = pv_coeff / (w + wp)
    return AlphaSample(delta_coeff=delta_coeff, pv_coefficient=pv_coeff), beta


def semiopen_sudden_near_dirichlet(k_prime, k, b: float, mu: float = 0.0,
                                   order: int = 1):
    """Perturbative sudden coefficients near Dirichlet, D: 0 -> b (either sign)."""
    if order not in (1, 2):
        raise UnsupportedOrderError("order must be 1 or 2")
    kp, k = float(k_prime), float(k)
    w, wp = float(_omega(k, mu)), float(_omega(kp, mu))
    pv_coeff = -b * k * kp / (math.pi * math.sqrt(w * wp))
    beta = pv_coeff / (w + wp)
    delta_coeff = 1.0 if order == 1 else 1.0 - (k * b) ** 2 / 2.0
    return AlphaSample(delta_coeff=delta_coeff, pv_coefficient=pv_coeff), beta


def cavity_sudden_far(table: CavityModeTable, eta1: float, eta2: float,
                      order: int = 1) -> DiscreteBogoliubovMatrix:
    """First-order sudden matrices between the cavity mode bases."""
    if order != 1:
        raise UnsupportedOrderError(
            "second-order coefficients are not available far from Dirichlet"
        )
    q = np.asarray(table.roots, dtype=float)
    k1, k2 = table.kappa1, table.kappa2
    parities = np.array([table.parity(x) for x in q])
    sgn = (-1.0) ** (parities[:, None] + parities[None, :])
    F = np.array([table.F(x) for x in q])
    s2 = np.sqrt((1.0 + (k2 * q[:, None]) ** 2) * (1.0 + (k2 * q[None, :]) ** 2))
    s1 = np.sqrt((1.0 + (k1 * q[:, None]) ** 2) * (1.0 + (k1 * q[None, :]) ** 2))
    num = eta1 * s2 - sgn * eta2 * s1
    root_pq = np.sqrt(q[:, None] * q[None, :])
    norm = np.sqrt(F[:, None] * F[None, :])
    dq = q[:, None] - q[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = num * root_pq / (dq * norm)
    np.fill_diagonal(alpha, 1.0)
    beta = -num * root_pq / ((q[:, None] + q[None, :]) * norm)
    return DiscreteBogoliubovMatrix(
        regime="cavity_far", order=1, labels=q, alpha=alpha, beta=beta
    )


def cavity_frequency_shift_far(table: CavityModeTable, p: float, eta1: float,
                               eta2: float) -> float:
    """Perturbed eigenfrequency of the root p under sudden eta1, eta2 shifts."""
    k1, k2 = table.kappa1, table.kappa2
    shift = (
        eta1 * (1.0 + (k2 * p) ** 2) - eta2 * (1.0 + (k1 * p) ** 2)
    ) / table.F(p)
    return (1.0 + shift) * p / table.L


def _near_dirichlet_E(m, n, eta1: float, eta2: float):
    return eta1 - (-1.0) ** (np.asarray(m) + np.asarray(n)) * eta2


def cavity_sudden_near_dirichlet(m: int, n: int, eta1: float, eta2: float,
                                 order: int = 1):
    """(alpha_mn, beta_mn) for the near-Dirichlet cavity through second order."""
    if order not in (1, 2):
        raise UnsupportedOrderError("order must be 1 or 2")
    if m < 1 or n < 1:
        raise ValueError("mode numbers must be positive integers")
    E = float(_near_dirichlet_E(m, n, eta1, eta2))
    d = eta1 - eta2
    root = math.sqrt(m * n)
    if m == n:
        alpha = 1.0
        if order == 2:
            alpha -= (eta1 * eta1 + eta1 * eta2 + eta2 * eta2) * (m * math.pi) ** 2 / 6.0
    else:
        alpha = E * root / (m - n)
        if order == 2:
            alpha -= E * d * n * root / (m - n) ** 2
    beta = -E * root / (m + n)
    if order == 2:
        beta -= E * d * n * root / (m + n) ** 2
    return alpha, beta


def cavity_frequency_shift_near_dirichlet(m: int, eta1: float, eta2: float,
                                          L: float) -> float:
    d = eta1 - eta2
    return (1.0 + d + d * d) * math.pi * m / L


def cavity_near_dirichlet_matrices(n_rows: int, n_cols: int, eta1: float,
                                   eta2: float, order: int = 1):
    """Rectangular (alpha, beta) blocks of the near-Dirichlet cavity matrices.

    Rows and columns index modes 1..n_rows and 1..n_cols. At order 1 the
    returned alpha is the first-order part only (zero diagonal); at order 2
    the returned matrices are the second-order parts only, so identity checks
    can combine orders explicitly.
    """
    if order not in (1, 2):
        raise UnsupportedOrderError("order must be 1 or 2")
    m = np.arange(1, n_rows + 1, dtype=float)[:, None]
    n = np.arange(1, n_cols + 1, dtype=float)[None, :]
    E = _near_dirichlet_E(m, n, eta1, eta2)
    root = np.sqrt(m * n)
    d = eta1 - eta2
    if order == 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = E * root / (m - n)
        alpha[m == n] = 0.0
        beta = -E * root / (m + n)
        return alpha, beta
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha2 = -E * d * n * root / (m - n) ** 2
    diag = m == n
    alpha2[diag] = -(
        (eta1 * eta1 + eta1 * eta2 + eta2 * eta2)
        * (np.broadcast_to(m, alpha2.shape)[diag] * math.pi) ** 2
        / 6.0
    )
    beta2 = -E * d * n * root / (m + n) ** 2
    return alpha2, beta2


def cavity_sudden_near_dirichlet_matrix(n_modes: int, eta1: float, eta2: float,
                                        order: int = 1) -> DiscreteBogoliubovMatrix:
    """Square DiscreteBogoliubovMatrix through the requested order."""
    a1, b1 = cavity_near_dirichlet_matrices(n_modes, n_modes, eta1, eta2, order=1)
    alpha = np.eye(n_modes) + a1
    beta = b1.copy()
    if order == 2:
        a2, b2 = cavity_near_dirichlet_matrices(n_modes, n_modes, eta1, eta2, order=2)
        # second-order formulas replace the first-order diagonal outright
        alpha[np.diag_indices(n_modes)] = 1.0
        alpha += a2
        beta += b2
    return DiscreteBogoliubovMatrix(
        regime="cavity_near_dirichlet",
        order=order,
        labels=np.arange(1, n_modes + 1),
        alpha=alpha,
        beta=beta,
    )


def _alternating_tail(N: int, p: float) -> float:
    """sum_{l > N} (-1)^l / (l - p), exact via digamma."""
    a = N - p
    sign = 1.0 if N % 2 == 0 else -1.0
    return sign * (-0.5) * (digamma((a + 2.0) / 2.0) - digamma((a + 1.0) / 2.0))


def cavity_near_dirichlet_quadratic_tail(m: int, n: int, N_inner: int,
                                         eta1: float, eta2: float,
                                         sign: int) -> float:
    """Exact tail sum_{l > N_inner} M_ml M_ln for M = alpha1 + sign*beta1.

    The summand is rational in l up to a (-1)^l factor from the eta pattern,
    so the tail reduces to digamma evaluations via the residue decomposition
    of l*(1/(m-l) - s/(m+l))*(1/(l-n) - s/(l+n)).
    """
    if m == n:
        raise ValueError("tail applies to off-diagonal entries only")
    s = float(sign)
    u = 1.0 / (m - n) - s / (m + n)
    # residues of the rational factor at poles l = m, -m, n, -n
    poles = np.array([m, -m, n, -n], dtype=float)
    res = np.array([-m * u, m * u, n * u, -n * u])
    nonalt = -np.sum(res * digamma(N_inner + 1.0 - poles))
    alt = sum(r * _alternating_tail(N_inner, p) for r, p in zip(res, poles))
    C0 = eta1 * eta1 + (-1.0) ** (m + n) * eta2 * eta2
    C1 = -eta1 * eta2 * ((-1.0) ** m + (-1.0) ** n)
    return math.sqrt(m * n) * (C0 * nonalt + C1 * alt)
