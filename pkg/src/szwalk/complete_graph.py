"""Closed forms and asymptotics for the walk on the complete graph.

With the m marked vertices placed last, the discriminant is block-diagonal
and only two rotation angles appear:

    cos(theta1) = 1/(n-1),    cos(theta2) = (n-m-1)/(n-1).

Every observable reduces to Chebyshev polynomials in cos(theta2); this
module evaluates those expressions directly and serves as the analytic
oracle for the simulation path.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .chebyshev import cheb_t, cheb_u
from .operators import WalkState
from .simulate import HittingReport, default_step_cap, scan_crossing

ASYMPTOTIC_REGIME_FACTOR = 20


@dataclass(frozen=True)
class CompleteGraphParams:
    """Vertex count n and marked count m (1 <= m < n) with the two angles."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if not 1 <= self.m < self.n:
            raise ValueError(f"need 1 <= m < n, got m={self.m}, n={self.n}")

    @property
    def cos_theta1(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def cos_theta2(self) -> float:
        return (self.n - self.m - 1) / (self.n - 1)

    @property
    def theta1(self) -> float:
        return math.acos(self.cos_theta1)

    @property
    def theta2(self) -> float:
        return math.acos(self.cos_theta2)

    @property
    def threshold(self) -> float:
        return 1.0 - self.m / self.n


@lru_cache(maxsize=1)
def inv_sinc_half() -> float:
    """Root of sin(x)/x = 1/2 on (1, pi), converged to 1e-14."""
    return float(brentq(lambda x: math.sin(x) / x - 0.5, 1.0, math.pi,
                        xtol=1e-15, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class AsymptoticConstants:
    """Computed constants for the large-n expansions (never transcribed)."""

    x_half: float

    @classmethod
    def default(cls) -> "AsymptoticConstants":
        return cls(inv_sinc_half())

    @property
    def hitting_coefficient(self) -> float:
        """Leading coefficient of the hitting time: x_half/(2 sqrt(2))."""
        return self.x_half / (2.0 * math.sqrt(2.0))

    @property
    def probability_at_hitting(self) -> float:
        """Leading term of p_M at the hitting time: x_half^2 / 8."""
        return self.x_half ** 2 / 8.0


def closed_F(params: CompleteGraphParams, T: float) -> float:
    """F(T) = 2(n-1)(n-m)(2T+1 - U_{2T}(cos theta2)) / (n(2n-m-2)(T+1))."""
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    n, m = params.n, params.m
    u = cheb_u(2.0 * T, params.cos_theta2)
    return 2.0 * (n - 1) * (n - m) * (2.0 * T + 1.0 - u) / (n * (2 * n - m - 2) * (T + 1.0))


def limiting_F(params: CompleteGraphParams) -> float:
    """Long-time Cesaro mean of F: 4(n-1)(n-m)/(n(2n-m-2))."""
    n, m = params.n, params.m
    return 4.0 * (n - 1) * (n - m) / (n * (2 * n - m - 2))


def hitting_time_closed(params: CompleteGraphParams,
                        T_cap: int | None = None) -> HittingReport:
    """Hitting time from the closed F only; same contract as the
    simulation-path hitting_time."""
    cap = default_step_cap(params.n) if T_cap is None else int(T_cap)
    H, tstar = scan_crossing(lambda T: closed_F(params, T), params.threshold, cap)
    return HittingReport(params.n, params.m, H, tstar, params.threshold,
                         limiting_F(params), method="closed")


def asymptotic_H(params: CompleteGraphParams,
                 consts: AsymptoticConstants | None = None) -> float:
    """Large-n expansion of the hitting time for n >> m:

    (x/2) sqrt(n/2m) - sqrt(1 - x^2/4)/(1 + 2 sqrt(1 - x^2/4)),  x = inv_sinc_half().
    """
    consts = consts or AsymptoticConstants.default()
    n, m = params.n, params.m
    if n < ASYMPTOTIC_REGIME_FACTOR * m:
        warnings.warn(f"asymptotic hitting time assumes n >> m (n={n}, m={m})",
                      stacklevel=2)
    x = consts.x_half
    r = math.sqrt(1.0 - x * x / 4.0)
    return (x / 2.0) * math.sqrt(n / (2.0 * m)) - r / (1.0 + 2.0 * r)


def closed_pM(params: CompleteGraphParams, t: float) -> float:
    """Probability of finding a marked vertex after t steps (t may be real)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    n, m = params.n, params.m
    c2 = params.cos_theta2
    d = 2 * n - m - 2
    bracket = ((n - 1) / d * cheb_t(2.0 * t, c2)
               + cheb_u(2.0 * t - 1.0, c2)
               + (n - m - 1) / d)
    return m * (m - 1) / (n * (n - 1)) + m * (n - m) / (n * (n - 1)) * bracket ** 2


def t_max(params: CompleteGraphParams) -> float:
    """First maximum of the success probability:
    arctan(sqrt(2n-m-2)/sqrt(m)) / (2 arccos((n-m-1)/(n-1)))."""
    n, m = params.n, params.m
    return math.atan(math.sqrt(2 * n - m - 2) / math.sqrt(m)) / (2.0 * params.theta2)


def t_max_asymptotic(params: CompleteGraphParams) -> float:
    """Large-n expansion of the first maximum: (pi/4) sqrt(n/2m) - 1/4."""
    return (math.pi / 4.0) * math.sqrt(params.n / (2.0 * params.m)) - 0.25


def asymptotic_probabilities(params: CompleteGraphParams,
                             consts: AsymptoticConstants | None = None
                             ) -> tuple[float, float]:
    """Leading terms of the success probability at t_max and at the hitting
    time: (1/2 + sqrt(m/2n), x_half^2/8)."""
    consts = consts or AsymptoticConstants.default()
    p_at_tmax = 0.5 + math.sqrt(params.m / (2.0 * params.n))
    return p_at_tmax, consts.probability_at_hitting


@dataclass(frozen=True)
class ReducedSpectrum:
    """Orthonormal eigenbasis of the reduced matrix: values[j] with column
    vectors[:, j]; the uniform vector (eigenvalue (n-m-1)/(n-1)) is last."""

    values: np.ndarray
    vectors: np.ndarray


def reduced_spectrum(params: CompleteGraphParams) -> ReducedSpectrum:
    """Explicit eigenpairs of the reduced matrix.

    Eigenvalue -1/(n-1) comes with v_j = (u_j - sqrt(j) e_{j+1})/sqrt(j+1),
    where u_j is the normalized uniform vector on the first j coordinates,
    for 1 <= j <= n-m-1; the uniform vector has eigenvalue (n-m-1)/(n-1).
    """
    n, m = params.n, params.m
    dim = n - m
    values = np.full(dim, -1.0 / (n - 1))
    values[-1] = (n - m - 1) / (n - 1)
    vectors = np.zeros((dim, dim))
    for j in range(1, dim):
        vectors[:j, j - 1] = 1.0 / math.sqrt(j)
        vectors[j, j - 1] = -math.sqrt(j)
        vectors[:, j - 1] /= math.sqrt(j + 1)
    vectors[:, -1] = 1.0 / math.sqrt(dim)
    return ReducedSpectrum(values, vectors)


def _block_state(n: int, m: int, w_uu: float, w_um: float, w_mu: float,
                 w_mm: float) -> WalkState:
    """Assemble a state constant on the four off-diagonal index blocks
    (unmarked/marked in each register), scaled by 1/sqrt(n(n-1))."""
    dim = n - m
    grid = np.zeros((n, n), dtype=complex)
    grid[:dim, :dim] = w_uu
    grid[:dim, dim:] = w_um
    grid[dim:, :dim] = w_mu
    grid[dim:, dim:] = w_mm
    np.fill_diagonal(grid, 0.0)
    grid /= math.sqrt(n * (n - 1))
    return WalkState(grid.ravel(), n)


def eigenvalue_one_closed(params: CompleteGraphParams) -> WalkState:
    """Explicit eigenvalue-1 component of the initial state: block weights
    -m/(2n-m-2), (n-m-1)/(2n-m-2) (both cross blocks), and 1."""
    n, m = params.n, params.m
    d = 2 * n - m - 2
    return _block_state(n, m, -m / d, (n - m - 1) / d, (n - m - 1) / d, 1.0)


def closed_state(params: CompleteGraphParams, t: float) -> WalkState:
    """Explicit psi(t): rotational blocks in T_{2t}, U_{2t-1} plus the
    eigenvalue-1 component."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    n, m = params.n, params.m
    c2 = params.cos_theta2
    d = 2 * n - m - 2
    T2t = cheb_t(2.0 * t, c2)
    U2t1 = cheb_u(2.0 * t - 1.0, c2)
    w_uu = (2.0 * (n - 1) * T2t - m) / d
    w_um = (n - 1) / d * T2t - U2t1 + (n - m - 1) / d
    w_mu = (n - 1) / d * T2t + U2t1 + (n - m - 1) / d
    return _block_state(n, m, w_uu, w_um, w_mu, 1.0)
