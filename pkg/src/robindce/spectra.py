"""Photon flux density spectra and Robin-vs-mirror comparisons.

The flux density at reduced frequency kbar = k'/omega_d is

    n(kbar) = omega_d * int_0^inf |B_hat(omega_d kbar, k)|^2 dk

and the total photon number is the integral of n over the sampled kbar
range. The inner integral is truncated adaptively, doubling the cutoff
until the total stabilizes, with a per-point quadrature error estimated
by refinement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .continuous import FirstOrderKernel

__all__ = [
    "FluxConfig",
    "FluxSpectrum",
    "TruncationNotConverged",
    "default_kbar_grid",
    "flux_density",
    "flux_spectrum",
    "compare_spectra",
]


class TruncationNotConverged(RuntimeError):
    """The inner-integral cutoff doubling failed to stabilize the total."""

    def __init__(self, ratio: float, k_max: float):
        super().__init__(
            f"flux truncation not converged: ratio {ratio:.3e} at k_max {k_max:.6g}"
        )
        self.ratio = ratio
        self.k_max = k_max


@dataclass(frozen=True)
class FluxConfig:
    """Numerical controls for the flux spectrum computation."""

    kbar_points: int = 400
    kbar_max: float = 2.0
    convergence_threshold: float = 1e-3
    panels_per_osc: float = 2.0
    order: int = 8
    max_doublings: int = 6
    threads: int = 1
    k_max_override: Optional[float] = None


@dataclass(frozen=True)
class FluxSpectrum:
    """Sampled flux density with truncation and quadrature diagnostics."""

    regime: str
    kbar_grid: np.ndarray
    n_values: np.ndarray
    total_N: float
    k_max_used: float
    inner_quad_error: np.ndarray
    convergence_ratio: float

    def to_rows(self):
        for kb, n, err in zip(self.kbar_grid, self.n_values, self.inner_quad_error):
            yield float(kb), float(n), float(err)


def default_kbar_grid(config: FluxConfig) -> np.ndarray:
    """Uniform grid on (0, kbar_max]; the open left end avoids k' = 0."""
    m = config.kbar_points
    return np.arange(1, m + 1) * (config.kbar_max / m)


def _inner_nodes(k_max: float, duration: float, ppo: float, order: int):
    """Composite Gauss-Legendre nodes on (0, k_max].

    Panels resolve the sinc-like oscillation scale 2 pi / duration that the
    windowed drive integral imprints on B_hat as a function of k.
    """
    oscillations = k_max * max(duration, 1e-12) / (2.0 * math.pi)
    npan = max(32, int(ppo * oscillations) + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, k_max, npan + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _row_fluxes(B_hat: Callable, omega_d: float, kbars: np.ndarray,
                nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per-row inner integrals, each a 1-D dot product.

    Each kbar row is evaluated independently so the result is bitwise
    identical no matter how the grid is chunked across threads.
    """
    out = np.empty(kbars.shape[0], dtype=float)
    for i, kb in enumerate(kbars):
        B = np.asarray(B_hat(omega_d * kb, nodes))
        out[i] = omega_d * float(np.dot(np.abs(B) ** 2, weights))
    return out


def _evaluate(B_hat, omega_d, kbar_grid, duration, k_max, config: FluxConfig,
              ppo: float, order: int) -> np.ndarray:
    nodes, weights = _inner_nodes(k_max, duration, ppo, order)
    threads = max(1, config.threads)
    if threads == 1 or kbar_grid.size < 2 * threads:
        return _row_fluxes(B_hat, omega_d, kbar_grid, nodes, weights)
    chunks = np.array_split(np.arange(kbar_grid.size), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [
            pool.submit(_row_fluxes, B_hat, omega_d, kbar_grid[idx], nodes, weights)
            for idx in chunks
        ]
        parts = [f.result() for f in futs]
    return np.concatenate(parts)


def flux_spectrum(kernel: FirstOrderKernel, omega_d: float,
                  config: Optional[FluxConfig] = None,
                  kbar_grid: Optional[np.ndarray] = None,
                  k_max_hint: Optional[float] = None) -> FluxSpectrum:
    """Flux density over a kbar grid with adaptive inner truncation.

    The initial cutoff is max(20 omega_d, k_max_hint or 0) and doubles
    until the total photon number changes by less than the configured
    threshold. For Robin far kernels pass k_max_hint = 10 / Lambda so the
    square-root suppression scale is always inside the first window.
    """
    cfg = config if config is not None else FluxConfig()
    if omega_d <= 0.0:
        raise ValueError("drive frequency must be positive")
    grid = default_kbar_grid(cfg) if kbar_grid is None else np.asarray(kbar_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0.0):
        raise ValueError("kbar grid must be 1-D with positive entries")
    duration = kernel.tf - kernel.t0

    if cfg.k_max_override is not None:
        # pinned cutoff: no adaptivity, convergence is the caller's burden
        k_max = float(cfg.k_max_override)
        n_prev = _evaluate(kernel.B_hat, omega_d, grid, duration, k_max, cfg,
                           cfg.panels_per_osc, cfg.order)
        ratio = 0.0
    else:
        k_max = max(20.0 * omega_d, k_max_hint or 0.0)
        n_prev = _evaluate(kernel.B_hat, omega_d, grid, duration, k_max, cfg,
                           cfg.panels_per_osc, cfg.order)
        ratio = math.inf
        for _ in range(cfg.max_doublings):
            n_next = _evaluate(kernel.B_hat, omega_d, grid, duration, 2.0 * k_max, cfg,
                               cfg.panels_per_osc, cfg.order)
            total_next = float(np.trapezoid(n_next, grid))
            total_prev = float(np.trapezoid(n_prev, grid))
            if total_next == 0.0:
                ratio = 0.0
                n_prev, k_max = n_next, 2.0 * k_max
                break
            ratio = abs(total_next - total_prev) / abs(total_next)
            n_prev, k_max = n_next, 2.0 * k_max
            if ratio < cfg.convergence_threshold:
                break
        else:
            raise TruncationNotConverged(ratio, k_max)

    n_ref = _evaluate(kernel.B_hat, omega_d, grid, duration, k_max, cfg,
                      1.5 * cfg.panels_per_osc, cfg.order + 4)
    inner_err = np.abs(n_ref - n_prev)
    total = float(np.trapezoid(n_ref, grid))
    return FluxSpectrum(
        regime=kernel.regime,
        kbar_grid=grid,
        n_values=n_ref,
        total_N=total,
        k_max_used=k_max,
        inner_quad_error=inner_err,
        convergence_ratio=ratio,
    )


def flux_density(kernel: FirstOrderKernel, omega_d: float, kbar: float,
                 config: Optional[FluxConfig] = None,
                 k_max_hint: Optional[float] = None) -> tuple[float, float]:
    """Flux density at a single kbar, returned with its quadrature error."""
    spec = flux_spectrum(kernel, omega_d, config=config,
                         kbar_grid=np.array([float(kbar)]), k_max_hint=k_max_hint)
    return float(spec.n_values[0]), float(spec.inner_quad_error[0])


def total_photon_number(spectrum: FluxSpectrum) -> float:
    """Integral of the flux density over the sampled kbar range."""
    return spectrum.total_N


def compare_spectra(robin_kernel: FirstOrderKernel, mirror_kernel: FirstOrderKernel,
                    omega_d: float, config: Optional[FluxConfig] = None,
                    kbar_grid: Optional[np.ndarray] = None,
                    k_max_hint: Optional[float] = None):
    """Paired spectra on a shared kbar grid.

    The caller is responsible for the drive matching rule (mirror
    acceleration derived from the Robin drive); this function only pins
    both computations to one grid and the same truncation policy.
    """
    cfg = config if config is not None else FluxConfig()
    grid = default_kbar_grid(cfg) if kbar_grid is None else np.asarray(kbar_grid, dtype=float)
    robin = flux_spectrum(robin_kernel, omega_d, config=cfg, kbar_grid=grid,
                          k_max_hint=k_max_hint)
    mirror = flux_spectrum(mirror_kernel, omega_d, config=cfg, kbar_grid=grid,
                           k_max_hint=k_max_hint)
    if robin.kbar_grid.shape != mirror.kbar_grid.shape or not np.array_equal(
            robin.kbar_grid, mirror.kbar_grid):
        raise ValueError("spectra computed on mismatched kbar grids")
    return robin, mirror
