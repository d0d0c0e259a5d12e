"""Singular triples of the discriminant and explicit walk eigenpairs.

Each singular value lambda_j = cos(theta_j) of the discriminant yields a
rotation plane of the walk operator with eigenvalues exp(+-2i theta_j);
singular value 1 contributes invariant (eigenvalue-1) directions. The
rest of the spectrum of U is eigenvalue 1 and is handled by projection
complement rather than by enumerating a basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .operators import Discriminant, WalkOperators, WalkState

DEFAULT_UNIT_TOL = 1e-9
SV_EXCURSION_TOL = 1e-9
DEGENERATE_SIN_TOL = 1e-8
_SYM_TOL = 1e-12


class DegenerateAngleError(ValueError):
    """A rotation angle collapsed below resolution without being flagged
    as a unit singular value."""


@dataclass(frozen=True)
class SingularTriple:
    """One singular triple (lambda, mu, nu) with lambda = cos(theta)."""

    value: float
    theta: float
    mu: np.ndarray
    nu: np.ndarray
    is_unit: bool


@dataclass(frozen=True)
class RotationalPair:
    """Normalized eigenvectors with eigenvalues exp(+-2i theta)."""

    theta: float
    plus: np.ndarray
    minus: np.ndarray


@dataclass(frozen=True)
class WalkSpectrum:
    """Singular triples sorted by value descending, with the unit-value
    multiplicity k; eigenvectors are attached by :func:`walk_eigenpairs`."""

    n: int
    triples: tuple[SingularTriple, ...]
    k: int
    unit_tol: float
    rotational_pairs: tuple[RotationalPair, ...] | None = None
    fixed_vectors: tuple[np.ndarray, ...] | None = None

    def rotational_triples(self) -> tuple[SingularTriple, ...]:
        return tuple(t for t in self.triples if not t.is_unit)

    def unit_triples(self) -> tuple[SingularTriple, ...]:
        return tuple(t for t in self.triples if t.is_unit)

    @property
    def thetas(self) -> np.ndarray:
        """Rotation angles of the non-unit triples."""
        return np.array([t.theta for t in self.triples if not t.is_unit])


@dataclass(frozen=True)
class OverlapCoefficients:
    """Overlaps of a state with the rotational eigenvectors.

    ``c_sq`` holds |c_j|^2 (equal for the + and - branch when the state is
    real); ``residual_norm_sq`` is the squared norm of the eigenvalue-1
    remainder.
    """

    thetas: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    c_sq: np.ndarray
    residual_norm_sq: float


def svd_discriminant(C: Discriminant | np.ndarray,
                     unit_tol: float = DEFAULT_UNIT_TOL) -> WalkSpectrum:
    """Decompose the discriminant into singular triples.

    Symmetric input goes through a real eigendecomposition: the triple for
    eigenpair (e, v) is (|e|, sign(e) v, v). Otherwise a full SVD is used.
    Values are clamped to [0, 1]; an excursion beyond 1 + 1e-9 is an error.
    """
    if unit_tol < 0:
        raise ValueError("unit_tol must be nonnegative")
    Cm = C.C if isinstance(C, Discriminant) else np.asarray(C, dtype=float)
    if Cm.ndim != 2 or Cm.shape[0] != Cm.shape[1]:
        raise ValueError("discriminant must be a square matrix")
    n = Cm.shape[0]

    if np.max(np.abs(Cm - Cm.T)) < _SYM_TOL:
        evals, evecs = np.linalg.eigh(Cm)
        values = np.abs(evals)
        signs = np.where(evals < 0, -1.0, 1.0)
        mus = evecs * signs[None, :]
        nus = evecs
    else:
        U, S, Vh = np.linalg.svd(Cm)
        values = S
        mus = U
        nus = Vh.T

    if values.size and float(values.max()) > 1.0 + SV_EXCURSION_TOL:
        raise ValueError(f"singular value {values.max():.12g} exceeds 1 beyond tolerance")
    values = np.clip(values, 0.0, 1.0)

    order = np.argsort(-values, kind="stable")
    triples = []
    k = 0
    for j in order:
        lam = float(values[j])
        mu = mus[:, j].copy()
        nu = nus[:, j].copy()
        # deterministic sign: largest-magnitude nu component positive
        pivot = int(np.argmax(np.abs(nu)))
        if nu[pivot] < 0:
            nu = -nu
            mu = -mu
        is_unit = abs(lam - 1.0) < unit_tol
        k += is_unit
        triples.append(SingularTriple(lam, float(math.acos(lam)), mu, nu, is_unit))
    return WalkSpectrum(n=n, triples=tuple(triples), k=k, unit_tol=unit_tol)


def walk_eigenpairs(ops: WalkOperators, spectrum: WalkSpectrum) -> WalkSpectrum:
    """Attach the explicit eigenvectors of the walk operator.

    Non-unit triples give the pair (A mu - e^{+-i theta} B nu)/(sqrt(2) sin theta)
    with eigenvalues exp(+-2i theta); unit triples give the invariant
    vectors A mu (colinear with B nu there).
    """
    pairs = []
    fixed = []
    for t in spectrum.triples:
        if t.is_unit:
            fixed.append(ops.apply_a(t.mu).astype(complex))
            continue
        s = math.sin(t.theta)
        if s < DEGENERATE_SIN_TOL:
            raise DegenerateAngleError(
                f"sin(theta)={s:.3g} below resolution for singular value "
                f"{t.value!r}; raise unit_tol to fold it into the unit subspace")
        a_mu = ops.apply_a(t.mu)
        b_nu = ops.apply_b(t.nu)
        scale = 1.0 / (math.sqrt(2.0) * s)
        plus = (a_mu - np.exp(+1j * t.theta) * b_nu) * scale
        minus = (a_mu - np.exp(-1j * t.theta) * b_nu) * scale
        pairs.append(RotationalPair(t.theta, plus, minus))
    return replace(spectrum, rotational_pairs=tuple(pairs), fixed_vectors=tuple(fixed))


def _rotational_stacks(spectrum: WalkSpectrum) -> tuple[np.ndarray, np.ndarray]:
    pairs = spectrum.rotational_pairs
    if pairs is None:
        raise ValueError("no eigenvectors attached: call walk_eigenpairs first")
    if not pairs:
        size = spectrum.n * spectrum.n
        return np.zeros((0, size), dtype=complex), np.zeros((0, size), dtype=complex)
    plus = np.array([p.plus for p in pairs])
    minus = np.array([p.minus for p in pairs])
    return plus, minus


def _coefficients_via_adjoints(spectrum: WalkSpectrum, psi0: WalkState,
                               ops: WalkOperators) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Overlaps without materializing eigenvectors: c_j^+- reduce to dot
    products against A^T psi0 and B^T psi0 (an O(n^2) total)."""
    rot = spectrum.rotational_triples()
    a = ops.apply_a_t(psi0.amps)
    b = ops.apply_b_t(psi0.amps)
    if not rot:
        empty = np.zeros(0, dtype=complex)
        return empty, empty.copy(), np.zeros(0)
    thetas = np.array([t.theta for t in rot])
    mu_dot = np.array([t.mu @ a for t in rot])
    nu_dot = np.array([t.nu @ b for t in rot])
    scale = 1.0 / (math.sqrt(2.0) * np.sin(thetas))
    c_plus = (mu_dot - np.exp(-1j * thetas) * nu_dot) * scale
    c_minus = (mu_dot - np.exp(+1j * thetas) * nu_dot) * scale
    return c_plus, c_minus, thetas


def overlap_coefficients(spectrum: WalkSpectrum, psi0: WalkState,
                         ops: WalkOperators | None = None) -> OverlapCoefficients:
    """Compute c_j^+- = <alpha_j^+-|psi0> and the eigenvalue-1 remainder norm.

    Uses the attached eigenvectors when present; otherwise ``ops`` must be
    given and the adjoint route is used (no n^2-sized eigenvectors needed).
    """
    if spectrum.rotational_pairs is not None:
        plus, minus = _rotational_stacks(spectrum)
        c_plus = plus.conj() @ psi0.amps
        c_minus = minus.conj() @ psi0.amps
        residual = psi0.amps - (c_plus @ plus + c_minus @ minus)
        residual_norm_sq = float(np.real(np.vdot(residual, residual)))
        thetas = np.array([p.theta for p in spectrum.rotational_pairs])
    elif ops is not None:
        c_plus, c_minus, thetas = _coefficients_via_adjoints(spectrum, psi0, ops)
        total = float(np.sum(np.abs(c_plus) ** 2 + np.abs(c_minus) ** 2))
        residual_norm_sq = max(psi0.norm ** 2 - total, 0.0)
    else:
        raise ValueError("need attached eigenvectors or the walk operators")
    c_sq = np.abs(c_plus) ** 2
    return OverlapCoefficients(thetas, c_plus, c_minus, c_sq, residual_norm_sq)


def eigenvalue_one_component(spectrum: WalkSpectrum, psi0: WalkState,
                             ops: WalkOperators | None = None) -> WalkState:
    """Project out the rotational planes: psi1 = psi0 - sum_j (c_j^+ alpha_j^+
    + c_j^- alpha_j^-). The result is invariant under the walk operator."""
    if spectrum.rotational_pairs is not None:
        plus, minus = _rotational_stacks(spectrum)
        c_plus = plus.conj() @ psi0.amps
        c_minus = minus.conj() @ psi0.amps
        amps = psi0.amps - (c_plus @ plus + c_minus @ minus)
        return WalkState(amps, spectrum.n)
    if ops is None:
        raise ValueError("need attached eigenvectors or the walk operators")
    c_plus, c_minus, thetas = _coefficients_via_adjoints(spectrum, psi0, ops)
    rot = spectrum.rotational_triples()
    if not rot:
        return psi0.copy()
    scale = 1.0 / (math.sqrt(2.0) * np.sin(thetas))
    mu_stack = np.array([t.mu for t in rot])
    nu_stack = np.array([t.nu for t in rot])
    u_vec = mu_stack.T @ ((c_plus + c_minus) * scale)
    w_vec = nu_stack.T @ ((c_plus * np.exp(+1j * thetas)
                           + c_minus * np.exp(-1j * thetas)) * scale)
    amps = psi0.amps - ops.apply_a(u_vec) + ops.apply_b(w_vec)
    return WalkState(amps, spectrum.n)
