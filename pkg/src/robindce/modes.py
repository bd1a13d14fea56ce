"""Static-boundary mode machinery for the 1+1D field on a half-line or cavity.

Provides Robin phase shifts, continuum and cavity mode evaluation, the
Klein-Gordon inner product, and the transcendental eigenvalue solver for a
cavity with Robin conditions at both ends.

Units: the propagation velocity is 1 throughout; lengths are in mm and
frequencies/wavenumbers in mm^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "RobinParameter",
    "SemiopenMode",
    "CavityModeTable",
    "QuadratureConfig",
    "QuadratureError",
    "robin_phase_shift",
    "semiopen_mode",
    "semiopen_mode_eval",
    "ground_mode",
    "kg_inner_product",
    "cavity_eigenvalues",
    "cavity_mode_eval",
    "dirichlet_cavity_mode",
]


@dataclass(frozen=True)
class RobinParameter:
    """Robin boundary parameter D in phi + D phi' = 0 at the boundary.

    The Neumann case D = infinity is a distinct state (``infinite=True``)
    and is never approximated by a large float.
    """

    value: float = 0.0
    infinite: bool = False

    @classmethod
    def neumann(cls) -> "RobinParameter":
        return cls(value=math.inf, infinite=True)

    @classmethod
    def dirichlet(cls) -> "RobinParameter":
        return cls(value=0.0)

    def is_admissible(self, mu: float) -> bool:
        """Whether the static theory has a strictly positive spectrum.

        For mu = 0: D <= 0 or D infinite. For mu > 0 additionally any
        D > 1/mu is admissible.
        """
        if self.infinite:
            return True
        if self.value <= 0.0:
            return True
        return mu > 0.0 and self.value > 1.0 / mu

    def inverse(self) -> float:
        """1/D, with the Neumann case mapping to 0."""
        if self.infinite:
            return 0.0
        if self.value == 0.0:
            raise ZeroDivisionError("1/D undefined for the Dirichlet case")
        return 1.0 / self.value


def robin_phase_shift(k: float, D: RobinParameter) -> float:
    """Phase shift delta with tan(delta) = -k D, |delta| < pi/2 (finite D).

    Returns pi/2 for the Neumann case.
    """
    if D.infinite:
        return 0.5 * math.pi
    return math.atan(-k * D.value)


@dataclass(frozen=True)
class SemiopenMode:
    """A continuum mode of the half-line with frequency omega = sqrt(k^2 + mu^2)."""

    k: float
    mu: float
    omega: float
    delta: float


def semiopen_mode(k: float, mu: float, D: RobinParameter) -> SemiopenMode:
    if k <= 0.0:
        raise ValueError("wavenumber k must be positive")
    if mu < 0.0:
        raise ValueError("mass mu must be non-negative")
    return SemiopenMode(k=k, mu=mu, omega=math.hypot(k, mu), delta=robin_phase_shift(k, D))


def semiopen_mode_eval(mode: SemiopenMode, shift_origin: float, t: float, x: float) -> complex:
    """Evaluate (1/sqrt(pi omega)) e^{-i omega (t - shift_origin)} sin(k x + delta)."""
    w = mode.omega
    return (
        (1.0 / math.sqrt(math.pi * w))
        * np.exp(-1j * w * (t - shift_origin))
        * math.sin(mode.k * x + mode.delta)
    )


@dataclass(frozen=True)
class ModeEvaluator:
    """A mode function together with its analytic time derivative.

    ``amplitude(x)`` is the spatial profile; the time dependence is
    e^{-i omega (t - shift_origin)} so the time derivative is available
    in closed form.
    """

    omega: float
    amplitude: Callable[[np.ndarray], np.ndarray]
    shift_origin: float = 0.0

    def value(self, t: float, x: np.ndarray) -> np.ndarray:
        return np.exp(-1j * self.omega * (t - self.shift_origin)) * self.amplitude(x)

    def dt(self, t: float, x: np.ndarray) -> np.ndarray:
        return -1j * self.omega * self.value(t, x)


def semiopen_mode_evaluator(mode: SemiopenMode, shift_origin: float = 0.0) -> ModeEvaluator:
    pref = 1.0 / math.sqrt(math.pi * mode.omega)
    k, d = mode.k, mode.delta
    return ModeEvaluator(
        omega=mode.omega,
        amplitude=lambda x: pref * np.sin(k * np.asarray(x, dtype=float) + d),
        shift_origin=shift_origin,
    )


def ground_mode(mu: float, D: RobinParameter) -> Optional[tuple[float, ModeEvaluator]]:
    """Discrete ground mode, present iff mu > 0 and 1/mu < D < infinity.

    Returns (frequency, evaluator) with frequency sqrt(mu^2 - 1/D^2) and
    spatial profile e^{-x/D} / (mu^2 D^2 - 1)^{1/4}, or None when the
    boundary condition supports no discrete mode.
    """
    if D.infinite or mu <= 0.0 or D.value <= 1.0 / mu:
        return None
    d = D.value
    omega = math.sqrt(mu * mu - 1.0 / (d * d))
    pref = (mu * mu * d * d - 1.0) ** -0.25
    ev = ModeEvaluator(omega=omega, amplitude=lambda x: pref * np.exp(-np.asarray(x, dtype=float) / d))
    return omega, ev


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails to meet the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureConfig:
    panels: int = 64
    order: int = 16
    rtol: float = 1e-9


def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _composite_gl(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int, order: int) -> complex:
    nodes, weights = _gl_nodes(order)
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    # all panel evaluation points at once
    pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    vals = f(pts).reshape(panels, order)
    return complex(np.sum(half[:, None] * weights[None, :] * vals))


def kg_inner_product(
    f: ModeEvaluator,
    g: ModeEvaluator,
    domain: tuple[float, float],
    t: float = 0.0,
    quad: QuadratureConfig | None = None,
) -> complex:
    """Klein-Gordon inner product -i int (f d_t g* - (d_t f) g*) dx on a finite window.

    Time derivatives are supplied analytically by the evaluators. The result
    is checked by panel doubling; failure to converge raises QuadratureError
    with the achieved error estimate.
    """
    quad = quad or QuadratureConfig()
    a, b = domain

    def integrand(x: np.ndarray) -> np.ndarray:
        fv = f.value(t, x)
        gv = np.conj(g.value(t, x))
        gdt = np.conj(g.dt(t, x))
        fdt = f.dt(t, x)
        return -1j * (fv * gdt - fdt * gv)

    coarse = _composite_gl(integrand, a, b, quad.panels, quad.order)
    fine = _composite_gl(integrand, a, b, 2 * quad.panels, quad.order)
    err = abs(fine - coarse)
    if err > quad.rtol * max(abs(fine), 1.0):
        raise QuadratureError(
            f"KG inner product did not converge: error estimate {err:.3e}", err
        )
    return fine


def _eigen_g(q: float, kappa1: float, kappa2: float) -> float:
    """Smooth form of the cavity eigenvalue equation.

    The pole-free rewrite of cot q = (kappa1 kappa2 q^2 - 1)/((kappa1+kappa2) q):
    g(q) = (kappa1+kappa2) q cos q - (kappa1 kappa2 q^2 - 1) sin q.
    """
    return (kappa1 + kappa2) * q * math.cos(q) - (kappa1 * kappa2 * q * q - 1.0) * math.sin(q)


def _eigen_residual(q: float, kappa1: float, kappa2: float) -> float:
    """Eigenvalue equation residual normalized by the coefficient scale."""
    scale = (kappa1 + kappa2) * q + abs(kappa1 * kappa2 * q * q - 1.0)
    return abs(_eigen_g(q, kappa1, kappa2)) / scale


@dataclass(frozen=True)
class CavityModeTable:
    """Eigenmode table for a cavity with Robin parameters D1 = -kappa1 L, D2 = kappa2 L."""

    kappa1: float
    kappa2: float
    L: float
    roots: np.ndarray = field(repr=False)
    parity_index: dict[float, int] = field(repr=False)

    def omega(self, q: float) -> float:
        return q / self.L

    def delta_q(self, q: float) -> float:
        # principal arctan, in (0, pi/2) since kappa1 and q are positive
        return math.atan(self.kappa1 * q)

    def F(self, q: float) -> float:
        k1, k2 = self.kappa1, self.kappa2
        return (1.0 + k1 + k1 * k1 * q * q) * (1.0 + k2 + k2 * k2 * q * q) - k1 * k2

    def parity(self, q: float) -> int:
        try:
            return self.parity_index[q]
        except KeyError:
            raise KeyError(f"q={q!r} is not a root of this table") from None

    def to_rows(self) -> list[tuple[float, float, float, int]]:
        """Columnar form (q, delta_q, F(q), phi_q) for caching/serialization."""
        return [(q, self.delta_q(q), self.F(q), self.parity_index[q]) for q in self.roots]


# inset keeping Brent brackets away from the interval endpoints m*pi, where
# the original cot form of the eigenvalue equation has poles
_BRACKET_INSET = 1e-9 * math.pi


def cavity_eigenvalues(kappa1: float, kappa2: float, m_max: int, L: float = 1.0) -> CavityModeTable:
    """First m_max roots of the cavity eigenvalue equation, one per (m pi, (m+1) pi).

    Each root is refined to 1e-13 absolute and then Newton-polished; the
    normalized residual of the eigenvalue equation is below 1e-12.
    """
    if kappa1 <= 0.0 or kappa2 <= 0.0:
        raise ValueError("kappa1 and kappa2 must be positive")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")

    roots = []
    for m in range(m_max):
        lo = m * math.pi + _BRACKET_INSET
        hi = (m + 1) * math.pi - _BRACKET_INSET
        glo = _eigen_g(lo, kappa1, kappa2)
        ghi = _eigen_g(hi, kappa1, kappa2)
        if glo == 0.0:
            q = lo
        elif ghi == 0.0:
            q = hi
        elif glo * ghi > 0.0:
            raise RuntimeError(
                f"bracketing failed in ({m}*pi, {m + 1}*pi) for kappa1={kappa1}, kappa2={kappa2}"
            )
        else:
            q = brentq(_eigen_g, lo, hi, args=(kappa1, kappa2), xtol=1e-13, rtol=8.9e-16)
        # Newton polish to push the residual to rounding level
        for _ in range(2):
            gq = _eigen_g(q, kappa1, kappa2)
            dg = (
                (kappa1 + kappa2) * (math.cos(q) - q * math.sin(q))
                - 2.0 * kappa1 * kappa2 * q * math.sin(q)
                - (kappa1 * kappa2 * q * q - 1.0) * math.cos(q)
            )
            if dg != 0.0:
                step = gq / dg
                if abs(step) < 0.1:
                    q -= step
        roots.append(q)

    roots_arr = np.asarray(roots)
    if not np.all(np.diff(roots_arr) > 0.0):
        raise RuntimeError("cavity eigenvalues are not strictly increasing")
    parity = {q: m for m, q in enumerate(roots)}
    return CavityModeTable(kappa1=kappa1, kappa2=kappa2, L=L, roots=roots_arr, parity_index=parity)


def cavity_mode_eval(table: CavityModeTable, q: float, t: float, x: float) -> complex:
    """Evaluate the normalized cavity mode with eigenvalue q at (t, x)."""
    table.parity(q)  # raises if q is not in the table
    k1, k2, L = table.kappa1, table.kappa2, table.L
    pref = math.sqrt((1.0 + k1 * k1 * q * q) * (1.0 + k2 * k2 * q * q) / (q * table.F(q)))
    return pref * np.exp(-1j * q * t / L) * math.sin(q * x / L + table.delta_q(q))


def cavity_mode_evaluator(table: CavityModeTable, q: float, shift_origin: float = 0.0) -> ModeEvaluator:
    table.parity(q)
    k1, k2, L = table.kappa1, table.kappa2, table.L
    pref = math.sqrt((1.0 + k1 * k1 * q * q) * (1.0 + k2 * k2 * q * q) / (q * table.F(q)))
    d = table.delta_q(q)
    return ModeEvaluator(
        omega=q / L,
        amplitude=lambda x: pref * np.sin(q * np.asarray(x, dtype=float) / L + d),
        shift_origin=shift_origin,
    )


def dirichlet_cavity_mode(n: int, L: float, shift_origin: float = 0.0) -> ModeEvaluator:
    """Standard Dirichlet cavity mode (1/sqrt(pi n)) e^{-i n pi t / L} sin(n pi x / L)."""
    if n < 1:
        raise ValueError("mode number n must be a positive integer")
    pref = 1.0 / math.sqrt(math.pi * n)
    return ModeEvaluator(
        omega=n * math.pi / L,
        amplitude=lambda x: pref * np.sin(n * math.pi * np.asarray(x, dtype=float) / L),
        shift_origin=shift_origin,
    )
