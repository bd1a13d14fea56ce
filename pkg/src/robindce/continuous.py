"""First-order Bogoliubov kernels for boundary modulations of arbitrary time profile.

Drive profiles are represented, where possible, as piecewise sums of complex
exponentials. The windowed oscillatory integrals

    I(Omega) = int_{t0}^{tf} e^{-i Omega (t - t0)} eta(t) dt

that enter every first-order kernel then have exact closed forms, including
the resonant limits, so no quadrature error enters the kernels for the
analytic drive kinds. Sampled drives integrate their linear interpolant in
closed form per sample interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .modes import CavityModeTable

__all__ = [
    "PwExp",
    "DriveProfile",
    "SinusoidDrive",
    "RampedSinusoidDrive",
    "SampledDrive",
    "FirstOrderKernel",
    "drive_integral",
    "semiopen_far_kernel",
    "semiopen_near_dirichlet_kernel",
    "cavity_far_kernel",
    "cavity_near_dirichlet_kernel",
    "rigid_cavity_mirror_kernel",
    "make_semiopen_far_kernel",
    "make_semiopen_near_dirichlet_kernel",
]

# below this phase, (e^{ix} - 1)/(ix) switches to its Taylor series
_SMALL_PHASE = 1e-6


def _eix_m1_over_ix(x: np.ndarray) -> np.ndarray:
    """(e^{ix} - 1)/(ix) with a series branch near x = 0."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < _SMALL_PHASE
    xs = x[small]
    out[small] = 1.0 + 1j * xs / 2.0 - xs * xs / 6.0 - 1j * xs**3 / 24.0
    xl = x[~small]
    out[~small] = (np.exp(1j * xl) - 1.0) / (1j * xl)
    return out


def _poly_moments(x: np.ndarray, max_degree: int) -> list[np.ndarray]:
    """Moments I_j(x) = int_0^1 u^j e^{i x u} du for j = 0..max_degree.

    Uses the integration-by-parts recurrence away from x = 0 and a Taylor
    series where the recurrence would cancel catastrophically.
    """
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 0.5
    out = [np.empty_like(x) for _ in range(max_degree + 1)]
    xs = x[small]
    for j in range(max_degree + 1):
        acc = np.zeros_like(xs)
        term = np.full_like(xs, 1.0 / (j + 1))
        n = 0
        while True:
            acc = acc + term
            n += 1
            term = term * (1j * xs) / n * ((n + j) / (n + j + 1))
            if n > 40:
                break
        out[j][small] = acc
    xl = x[~small]
    eix = np.exp(1j * xl)
    prev = (eix - 1.0) / (1j * xl)
    out[0][~small] = prev
    for j in range(1, max_degree + 1):
        prev = (eix - j * prev) / (1j * xl)
        out[j][~small] = prev
    return out


@dataclass(frozen=True)
class PwExp:
    """Piecewise sum of complex exponentials on local time s.

    ``pieces`` is a sequence of (a, b, terms) with a < b and terms a list of
    (coefficient, nu) pairs, representing f(s) = sum c e^{i nu s} on [a, b).
    """

    pieces: tuple

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        for a, b, terms in self.pieces:
            inside = (s >= a) & (s < b)
            for c, nu in terms:
                out[inside] += c * np.exp(1j * nu * s[inside])
        return out.real if out.ndim else complex(out).real

    def second_derivative(self) -> "PwExp":
        return PwExp(
            tuple(
                (a, b, [(-c * nu * nu, nu) for c, nu in terms])
                for a, b, terms in self.pieces
            )
        )

    def integral(self, Omega):
        """Exact int f(s) e^{-i Omega s} ds over the support, vectorized in Omega."""
        Om = np.asarray(Omega, dtype=float)
        out = np.zeros(Om.shape if Om.ndim else (), dtype=complex)
        for a, b, terms in self.pieces:
            h = b - a
            for c, nu in terms:
                d = nu - Om
                out = out + c * h * np.exp(1j * d * a) * _eix_m1_over_ix(d * h)
        return out if np.ndim(Omega) else complex(out)

    def split(self, s_mid: float) -> tuple["PwExp", "PwExp"]:
        """Split into [0, s_mid) and [s_mid, end), the latter re-based to s' = s - s_mid."""
        left, right = [], []
        for a, b, terms in self.pieces:
            if b <= s_mid:
                left.append((a, b, terms))
            elif a >= s_mid:
                shifted = [(c * np.exp(1j * nu * s_mid), nu) for c, nu in terms]
                right.append((a - s_mid, b - s_mid, shifted))
            else:
                left.append((a, s_mid, terms))
                shifted = [(c * np.exp(1j * nu * s_mid), nu) for c, nu in terms]
                right.append((0.0, b - s_mid, shifted))
        return PwExp(tuple(left)), PwExp(tuple(right))


def _sin_terms(amp: float, w: float) -> list[tuple[complex, float]]:
    """amp*sin(w s) as exponential terms."""
    return [(-0.5j * amp, w), (0.5j * amp, -w)]


def _product_terms(t1: Sequence, t2: Sequence) -> list[tuple[complex, float]]:
    return [(c1 * c2, n1 + n2) for c1, n1 in t1 for c2, n2 in t2]


@dataclass(frozen=True)
class DriveProfile:
    """Base drive profile on the window [t0, tf].

    Subclasses provide ``integral(Omega)`` for the windowed oscillatory
    integral (local time measured from t0) and pointwise evaluation.
    """

    t0: float
    tf: float

    def __post_init__(self):
        if not self.t0 < self.tf:
            raise ValueError("drive window requires t0 < tf")

    @property
    def duration(self) -> float:
        return self.tf - self.t0

    def __call__(self, t):
        raise NotImplementedError

    def integral(self, Omega):
        raise NotImplementedError


@dataclass(frozen=True)
class _PwExpDrive(DriveProfile):
    """Drive backed by an exact piecewise-exponential representation."""

    pwexp: PwExp = None

    def __call__(self, t):
        return self.pwexp(np.asarray(t, dtype=float) - self.t0)

    def integral(self, Omega):
        return self.pwexp.integral(Omega)

    def second_derivative(self) -> "_PwExpDrive":
        return _PwExpDrive(t0=self.t0, tf=self.tf, pwexp=self.pwexp.second_derivative())

    def scaled(self, factor: float) -> "_PwExpDrive":
        scaled_pieces = tuple(
            (a, b, [(factor * c, nu) for c, nu in terms])
            for a, b, terms in self.pwexp.pieces
        )
        return _PwExpDrive(t0=self.t0, tf=self.tf, pwexp=PwExp(scaled_pieces))

    def split(self, t_mid: float) -> tuple["_PwExpDrive", "_PwExpDrive"]:
        left, right = self.pwexp.split(t_mid - self.t0)
        return (
            _PwExpDrive(t0=self.t0, tf=t_mid, pwexp=left),
            _PwExpDrive(t0=t_mid, tf=self.tf, pwexp=right),
        )


class ZeroDrive(_PwExpDrive):
    def __init__(self, t0: float, tf: float):
        super().__init__(t0=t0, tf=tf, pwexp=PwExp(()))


class SinusoidDrive(_PwExpDrive):
    """eta(t) = epsilon sin(omega_d (t - t0)) on [t0, tf]."""

    def __init__(self, epsilon: float, omega_d: float, t0: float, tf: float):
        pw = PwExp(((0.0, tf - t0, _sin_terms(epsilon, omega_d)),))
        super().__init__(t0=t0, tf=tf, pwexp=pw)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "omega_d", omega_d)


class RampedSinusoidDrive(_PwExpDrive):
    """Sinusoid multiplied by smooth sin^2 ramps of the given ramp time.

    The window rises as sin^2(pi s / (2 ramp)) over [0, ramp], is 1 on the
    plateau, and falls symmetrically over [T - ramp, T]. Both the drive and
    its first derivative vanish at the endpoints, which is the gentle
    start/end needed for the Robin-to-mirror matching checks.
    """

    def __init__(self, epsilon: float, omega_d: float, t0: float, tf: float, ramp: float):
        T = tf - t0
        if not 0.0 < ramp <= 0.5 * T:
            raise ValueError("ramp must be positive and at most half the window")
        sin_t = _sin_terms(epsilon, omega_d)
        wr = math.pi / ramp
        up = [(0.5, 0.0), (-0.25, wr), (-0.25, -wr)]
        down = [
            (0.5, 0.0),
            (-0.25 * np.exp(-1j * wr * T), wr),
            (-0.25 * np.exp(1j * wr * T), -wr),
        ]
        pieces = (
            (0.0, ramp, _product_terms(sin_t, up)),
            (ramp, T - ramp, sin_t),
            (T - ramp, T, _product_terms(sin_t, down)),
        )
        super().__init__(t0=t0, tf=tf, pwexp=PwExp(pieces))
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "omega_d", omega_d)
        object.__setattr__(self, "ramp", ramp)


@dataclass(frozen=True)
class SampledDrive(DriveProfile):
    """Uniformly sampled drive, integrated as its cubic-spline interpolant.

    The oscillatory factor is treated analytically: per sample interval the
    spline polynomial is integrated against e^{-i Omega s} in closed form, so
    the only modelling error is the spline interpolation error, which scales
    as dt^4 and is accounted for through the reported ``dt``.
    """

    dt: float = 0.0
    values: tuple = ()

    @classmethod
    def from_values(cls, t0: float, dt: float, values) -> "SampledDrive":
        vals = tuple(float(v) for v in values)
        if len(vals) < 4:
            raise ValueError("sampled drive needs at least four samples")
        tf = t0 + dt * (len(vals) - 1)
        return cls(t0=t0, tf=tf, dt=dt, values=vals)

    def _spline(self):
        from scipy.interpolate import CubicSpline

        grid = np.arange(len(self.values)) * self.dt
        return CubicSpline(grid, np.asarray(self.values), bc_type="not-a-knot")

    def __call__(self, t):
        s = np.asarray(t, dtype=float) - self.t0
        return self._spline()(np.clip(s, 0.0, self.tf - self.t0))

    def integral(self, Omega):
        Om = np.atleast_1d(np.asarray(Omega, dtype=float))
        spline = self._spline()
        # coefficients c[d, j] multiply (s - s_j)^(3-d) on interval j
        c = spline.c
        n = c.shape[1]
        h = self.dt
        s_left = np.arange(n) * h
        x = -Om[:, None] * h
        moments = _poly_moments(x, 3)
        phase = np.exp(-1j * Om[:, None] * s_left[None, :])
        contrib = np.zeros((len(Om), n), dtype=complex)
        for d in range(4):
            power = 3 - d
            contrib += c[d][None, :] * h ** (power + 1) * moments[power]
        out = (phase * contrib).sum(axis=1)
        return out if np.ndim(Omega) else complex(out[0])


@dataclass(frozen=True)
class CallbackDrive(DriveProfile):
    """Drive given by an arbitrary callable, integrated adaptively."""

    fn: Callable = None

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    def integral(self, Omega):
        from scipy.integrate import quad

        def one(om: float) -> complex:
            re, _ = quad(
                lambda s: float(self.fn(np.asarray(s + self.t0))) * math.cos(om * s),
                0.0,
                self.duration,
                limit=400,
                epsabs=1e-13,
                epsrel=1e-12,
            )
            im, _ = quad(
                lambda s: float(self.fn(np.asarray(s + self.t0))) * math.sin(om * s),
                0.0,
                self.duration,
                limit=400,
                epsabs=1e-13,
                epsrel=1e-12,
            )
            return complex(re, -im)

        if np.ndim(Omega):
            return np.array([one(float(om)) for om in np.ravel(Omega)]).reshape(
                np.shape(Omega)
            )
        return one(float(Omega))


def drive_integral(profile: DriveProfile, Omega):
    """int_{t0}^{tf} e^{-i Omega (t - t0)} eta(t) dt, exact for analytic kinds."""
    return profile.integral(Omega)


@dataclass(frozen=True)
class FirstOrderKernel:
    """First-order Bogoliubov data for one regime.

    Full coefficients reconstruct as alpha = phase * (delta + A_hat) and
    beta = phase * B_hat, with phase = phase_prefactor(k') of unit modulus.
    """

    regime: str
    A_hat: Callable
    B_hat: Callable
    phase_prefactor: Callable
    t0: float
    tf: float


def _omega_of(k, mu: float):
    k = np.asarray(k, dtype=float)
    return np.sqrt(k * k + mu * mu)


def semiopen_far_kernel(k_prime, k, Lambda: float, mu: float, profile: DriveProfile):
    """(A_hat, B_hat) for the semiopen far-from-Dirichlet Robin modulation.

    Broadcasts over array-valued k_prime and k.
    """
    if Lambda <= 0.0:
        raise ValueError("Lambda must be positive")
    kp = np.asarray(k_prime, dtype=float)
    k = np.asarray(k, dtype=float)
    wp, w = _omega_of(kp, mu), _omega_of(k, mu)
    pref = (
        Lambda
        * k
        * kp
        / (np.pi * np.sqrt(w * wp) * np.sqrt(1.0 + (k * Lambda) ** 2) * np.sqrt(1.0 + (kp * Lambda) ** 2))
    )
    A = -1j * pref * profile.integral(wp - w)
    B = 1j * pref * profile.integral(wp + w)
    return A, B


def semiopen_near_dirichlet_kernel(k_prime, k, mu: float, profile_b: DriveProfile):
    """(A_hat, B_hat) for the semiopen near-Dirichlet modulation D = b(t)."""
    kp = np.asarray(k_prime, dtype=float)
    k = np.asarray(k, dtype=float)
    wp, w = _omega_of(kp, mu), _omega_of(k, mu)
    pref = k * kp / (np.pi * np.sqrt(w * wp))
    A = 1j * pref * profile_b.integral(wp - w)
    B = -1j * pref * profile_b.integral(wp + w)
    return A, B


def cavity_far_kernel(
    table: CavityModeTable,
    p: float,
    q: float,
    eta1: DriveProfile,
    eta2: DriveProfile,
):
    """(A_hat, B_hat) between cavity roots p and q, far from Dirichlet."""
    L = table.L
    sgn = (-1.0) ** (table.parity(p) + table.parity(q))
    k1, k2 = table.kappa1, table.kappa2
    s2 = math.sqrt((1.0 + k2 * k2 * p * p) * (1.0 + k2 * k2 * q * q))
    s1 = math.sqrt((1.0 + k1 * k1 * p * p) * (1.0 + k1 * k1 * q * q))
    pref = 1j * math.sqrt(p * q) / (L * math.sqrt(table.F(p) * table.F(q)))
    wp, wq = p / L, q / L
    A = pref * (s2 * eta1.integral(wp - wq) - sgn * s1 * eta2.integral(wp - wq))
    B = -pref * (s2 * eta1.integral(wp + wq) - sgn * s1 * eta2.integral(wp + wq))
    return A, B


def cavity_near_dirichlet_kernel(
    m: int, n: int, L: float, eta1: DriveProfile, eta2: DriveProfile
):
    """(A_hat, B_hat) between Dirichlet cavity modes m and n under small end motions."""
    if m < 1 or n < 1:
        raise ValueError("mode numbers must be positive integers")
    sgn = (-1.0) ** (m + n)
    wm, wn = math.pi * m / L, math.pi * n / L
    pref = 1j * math.pi * math.sqrt(m * n) / L
    A = pref * (eta1.integral(wm - wn) - sgn * eta2.integral(wm - wn))
    B = -pref * (eta1.integral(wm + wn) - sgn * eta2.integral(wm + wn))
    return A, B


def rigid_cavity_mirror_kernel(m: int, n: int, L: float, accel_profile):
    """(A_hat, B_hat) for a rigidly moving Dirichlet cavity.

    ``accel_profile`` supplies the proper acceleration at the cavity centre
    and its windowed oscillatory integral. The diagonal A_hat vanishes.
    """
    if m < 1 or n < 1:
        raise ValueError("mode numbers must be positive integers")
    wm, wn = math.pi * m / L, math.pi * n / L
    parity = 1.0 - (-1.0) ** (m + n)
    if m == n:
        A = 0.0j
    else:
        A = (
            -1j
            * math.pi
            * math.sqrt(m * n)
            * parity
            / (L * L * (wm - wn) ** 2)
            * accel_profile.integral(wm - wn)
        )
    B = (
        1j
        * math.pi
        * math.sqrt(m * n)
        * parity
        / (L * L * (wm + wn) ** 2)
        * accel_profile.integral(wm + wn)
    )
    return A, B


def make_semiopen_far_kernel(Lambda: float, mu: float, profile: DriveProfile) -> FirstOrderKernel:
    T = profile.duration
    return FirstOrderKernel(
        regime="semiopen_far",
        A_hat=lambda kp, k: semiopen_far_kernel(kp, k, Lambda, mu, profile)[0],
        B_hat=lambda kp, k: semiopen_far_kernel(kp, k, Lambda, mu, profile)[1],
        phase_prefactor=lambda kp: np.exp(1j * _omega_of(kp, mu) * T),
        t0=profile.t0,
        tf=profile.tf,
    )


def make_semiopen_near_dirichlet_kernel(mu: float, profile_b: DriveProfile) -> FirstOrderKernel:
    T = profile_b.duration
    return FirstOrderKernel(
        regime="semiopen_near_dirichlet",
        A_hat=lambda kp, k: semiopen_near_dirichlet_kernel(kp, k, mu, profile_b)[0],
        B_hat=lambda kp, k: semiopen_near_dirichlet_kernel(kp, k, mu, profile_b)[1],
        phase_prefactor=lambda kp: np.exp(1j * _omega_of(kp, mu) * T),
        t0=profile_b.t0,
        tf=profile_b.tf,
    )
