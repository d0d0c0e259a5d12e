"""Walk simulation: initial state, evolution, F(T), hitting time, success
probability.

The driving quantity is the running Cesaro average

    F(T) = (1/(T+1)) sum_{t=0..T} ||psi(t) - psi(0)||^2,

and the hitting time is the least integer T with F(T) >= 1 - m/n. In the
rotational eigenbasis F has the closed form
(2/(T+1)) sum_j |c_j|^2 (2T+1 - U_{2T}(cos theta_j)), which extends to real
T and supplies the continuous crossing T*.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
from scipy.optimize import brentq

from .markov import MarkovChain, absorb
from .operators import Discriminant, WalkOperators, WalkState, build_operators, discriminant
from .spectral import (
    OverlapCoefficients,
    WalkSpectrum,
    eigenvalue_one_component,
    overlap_coefficients,
    svd_discriminant,
    walk_eigenpairs,
)

# above this size the n^2-long eigenvectors are not materialized
MATERIALIZE_LIMIT = 128


class NoCrossingError(RuntimeError):
    """F(T) never reached the hitting threshold within the step cap."""


@dataclass
class EvolutionTrace:
    """Per-step record of a direct evolution: squared deviation from the
    initial state, marked-vertex probability, and the running average F."""

    t: np.ndarray
    dist2: np.ndarray
    pM: np.ndarray
    F: np.ndarray

    def rows(self) -> Iterator[tuple[int, float, float, float]]:
        for i in range(len(self.t)):
            yield int(self.t[i]), float(self.dist2[i]), float(self.F[i]), float(self.pM[i])

    def write_csv(self, path) -> None:
        """Columns t,dist2,F,pM; floats carry 17 significant digits."""
        with open(Path(path), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t", "dist2", "F", "pM"])
            for t, d, f, p in self.rows():
                writer.writerow([t, f"{d:.17g}", f"{f:.17g}", f"{p:.17g}"])


@dataclass(frozen=True)
class HittingReport:
    """Discrete hitting time H, continuous crossing Tstar, the threshold
    1 - m/n, and the long-time mean of F."""

    n: int
    m: int
    H: int
    Tstar: float
    threshold: float
    limiting: float
    method: str = "spectral"


@dataclass(frozen=True)
class WalkBundle:
    """Everything the spectral route needs, prepared once per chain."""

    chain: MarkovChain
    ops: WalkOperators
    disc: Discriminant
    spectrum: WalkSpectrum
    psi0: WalkState
    coeffs: OverlapCoefficients
    psi1: WalkState


def initial_state(chain: MarkovChain) -> WalkState:
    """Uniform edge superposition (1/sqrt(n)) sum_xy sqrt(p_xy) |x,y>.

    Built from the unmodified chain; it is invariant under the unmarked
    walk operator.
    """
    amps = (np.sqrt(chain.P) / math.sqrt(chain.n)).astype(complex).ravel()
    return WalkState(amps, chain.n)


def success_probability(state: WalkState, marked: Iterable[int]) -> float:
    """Probability that the first register holds a marked vertex."""
    marked = tuple(marked)
    if not marked:
        return 0.0
    idx = np.asarray(marked, dtype=int) - 1
    grid = state.grid()
    return float(np.sum(np.abs(grid[idx, :]) ** 2))


def evolve_direct(ops: WalkOperators, psi0: WalkState, steps: int) -> EvolutionTrace:
    """Repeated application of the one-step operator, recording dist2, pM,
    and the running Cesaro average F."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    a0 = psi0.amps
    amps = a0.copy()
    dist2 = np.zeros(steps + 1)
    pM = np.zeros(steps + 1)
    marked_idx = np.asarray(ops.marked, dtype=int) - 1 if ops.marked else None
    n = ops.n
    for t in range(steps + 1):
        if t > 0:
            amps = ops.step_amps(amps)
        diff = amps - a0
        dist2[t] = float(np.real(np.vdot(diff, diff)))
        if marked_idx is not None:
            pM[t] = float(np.sum(np.abs(amps.reshape(n, n)[marked_idx, :]) ** 2))
    F = np.cumsum(dist2) / np.arange(1, steps + 2)
    return EvolutionTrace(np.arange(steps + 1), dist2, pM, F)


def evolve_spectral(spectrum: WalkSpectrum, coeffs: OverlapCoefficients,
                    psi1: WalkState, t: float) -> WalkState:
    """Resynthesize psi(t) from the eigenbasis:
    sum_j (c_j^+ e^{2i theta_j t} alpha_j^+ + c_j^- e^{-2i theta_j t} alpha_j^-) + psi1."""
    pairs = spectrum.rotational_pairs
    if pairs is None:
        raise ValueError("no eigenvectors attached: call walk_eigenpairs first")
    amps = psi1.amps.copy()
    if pairs:
        plus = np.array([p.plus for p in pairs])
        minus = np.array([p.minus for p in pairs])
        phases = np.exp(2j * coeffs.thetas * t)
        amps += (coeffs.c_plus * phases) @ plus
        amps += (coeffs.c_minus / phases) @ minus
    return WalkState(amps, spectrum.n)


def dist2_chebyshev(coeffs: OverlapCoefficients, t: float) -> float:
    """||psi(t) - psi(0)||^2 = 4 sum_j |c_j|^2 (1 - T_{2t}(cos theta_j)),
    evaluated as 4 sum |c_j|^2 (1 - cos(2 t theta_j)); t may be real."""
    if coeffs.c_sq.size == 0:
        return 0.0
    return float(4.0 * np.sum(coeffs.c_sq * (1.0 - np.cos(2.0 * t * coeffs.thetas))))


def F_of_T(coeffs: OverlapCoefficients, T: float) -> float:
    """Closed form of the running average over the rotational planes.

    Valid at integer T (where it matches the Cesaro average of dist2) and
    at real T >= 0 through U_{2T}(cos theta) = sin((2T+1) theta)/sin(theta).
    """
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    if coeffs.c_sq.size == 0:
        return 0.0
    th = coeffs.thetas
    u2t = np.sin((2.0 * T + 1.0) * th) / np.sin(th)
    return float(2.0 / (T + 1.0) * np.sum(coeffs.c_sq * (2.0 * T + 1.0 - u2t)))


def prepare_walk(chain: MarkovChain, unit_tol: float = 1e-9,
                 materialize: bool | None = None) -> WalkBundle:
    """Run the spectral pipeline once: absorb, build operators, decompose
    the discriminant, and compute overlaps and the eigenvalue-1 component.

    ``materialize`` controls whether the n^2-long eigenvectors are built
    (needed by evolve_spectral); by default only for n <= 128.
    """
    if materialize is None:
        materialize = chain.n <= MATERIALIZE_LIMIT
    absorbed = absorb(chain)
    ops = build_operators(absorbed)
    disc = discriminant(absorbed)
    spectrum = svd_discriminant(disc, unit_tol=unit_tol)
    psi0 = initial_state(chain)
    if materialize:
        spectrum = walk_eigenpairs(ops, spectrum)
        coeffs = overlap_coefficients(spectrum, psi0)
        psi1 = eigenvalue_one_component(spectrum, psi0)
    else:
        coeffs = overlap_coefficients(spectrum, psi0, ops=ops)
        psi1 = eigenvalue_one_component(spectrum, psi0, ops=ops)
    return WalkBundle(chain, ops, disc, spectrum, psi0, coeffs, psi1)


def default_step_cap(n: int) -> int:
    """Generous scan cap: the complete-graph hitting time is O(sqrt(n/m))."""
    return max(10, math.ceil(10.0 * math.sqrt(n)))


def scan_crossing(F, threshold: float, cap: int) -> tuple[int, float]:
    """Forward-scan an F callable for the least integer T with
    F(T) >= threshold, then bisect the continuous extension on [H-1, H]."""
    H = None
    for T in range(cap + 1):
        if F(T) >= threshold:
            H = T
            break
    if H is None:
        raise NoCrossingError(
            f"F(T) stayed below {threshold:.6g} for all T <= {cap}")
    if H == 0:
        return 0, 0.0
    tstar = brentq(lambda T: F(T) - threshold, H - 1, H, xtol=1e-12)
    return H, float(tstar)


def hitting_time(chain: MarkovChain, T_cap: int | None = None,
                 unit_tol: float = 1e-9) -> HittingReport:
    """Least integer T with F(T) >= 1 - m/n, plus the continuous crossing.

    Raises NoCrossingError when the threshold is not reached within the
    cap (default 10 sqrt(n)), which flags pathological inputs.
    """
    if chain.m == 0:
        raise ValueError("hitting time needs at least one marked vertex")
    bundle = prepare_walk(chain, unit_tol=unit_tol, materialize=False)
    threshold = 1.0 - chain.m / chain.n
    cap = default_step_cap(chain.n) if T_cap is None else int(T_cap)
    H, tstar = scan_crossing(lambda T: F_of_T(bundle.coeffs, T), threshold, cap)
    limiting = float(4.0 * np.sum(bundle.coeffs.c_sq))
    return HittingReport(chain.n, chain.m, H, tstar, threshold, limiting,
                         method="spectral")
