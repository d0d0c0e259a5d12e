"""Bipartite pair vectors, reflections, and the one-step walk operator.

The walk lives on the n^2-dimensional product space with basis |x,y>. The
two isometries lift row vectors into that space:

    A e_x = |x> (x) sum_y sqrt(p'_xy) |y>        (outgoing edges of x)
    B e_y = (sum_x sqrt(p'_yx) |x>) (x) |y>      (incoming edges of y)

One evolution step is U = R_B R_A with R = 2 P - I the reflection through
the corresponding column span. Everything is applied matrix-free: a step
costs two O(n^2) passes over the precomputed square-root matrix, and no
n^2 x n^2 operator is ever formed outside the small dense oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .markov import AbsorbingChain

DENSE_AB_LIMIT = 64
DENSE_U_LIMIT = 32


@dataclass
class WalkState:
    """Complex amplitude vector over the n^2 basis |x,y>.

    Flat index convention: (x, y) -> (x-1)*n + (y-1), 1-based vertices.
    States are treated as immutable once built; evolution returns new ones.
    """

    amps: np.ndarray
    n: int
    _norm: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).ravel()
        if amps.size != self.n * self.n:
            raise ValueError(f"state must have {self.n * self.n} amplitudes, got {amps.size}")
        self.amps = amps

    @property
    def norm(self) -> float:
        if self._norm is None:
            self._norm = float(np.linalg.norm(self.amps))
        return self._norm

    def grid(self) -> np.ndarray:
        """(n, n) view; entry [x-1, y-1] is the |x,y> amplitude."""
        return self.amps.reshape(self.n, self.n)

    def amplitude(self, x: int, y: int) -> complex:
        """1-based accessor for a single basis amplitude."""
        return complex(self.amps[(x - 1) * self.n + (y - 1)])

    def copy(self) -> "WalkState":
        return WalkState(self.amps.copy(), self.n)


@dataclass(frozen=True)
class Discriminant:
    """Matrix of pair-vector inner products: C_xy = sqrt(p'_xy p'_yx)."""

    C: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError("discriminant must be square")
        C = C.copy()
        C.setflags(write=False)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.C.shape[0]


class WalkOperators:
    """Matrix-free application of the isometries, reflections, and U."""

    def __init__(self, sqrt_p: np.ndarray, marked: tuple[int, ...] = ()):
        sqrt_p = np.asarray(sqrt_p, dtype=float)
        if sqrt_p.ndim != 2 or sqrt_p.shape[0] != sqrt_p.shape[1]:
            raise ValueError("square-root transition matrix must be square")
        self.n = sqrt_p.shape[0]
        sqrt_p = sqrt_p.copy()
        sqrt_p.setflags(write=False)
        self.sqrt_p = sqrt_p
        self.marked = tuple(sorted(marked))

    # -- isometries and adjoints --------------------------------------

    def apply_a(self, u: np.ndarray) -> np.ndarray:
        """Lift an n-vector: (A u)[x,y] = u[x] * sqrt(p'_xy)."""
        u = np.asarray(u)
        if u.shape != (self.n,):
            raise ValueError(f"expected an n-vector of length {self.n}, got shape {u.shape}")
        return (u[:, None] * self.sqrt_p).ravel()

    def apply_a_t(self, v: np.ndarray) -> np.ndarray:
        """Adjoint: (A^T v)[x] = sum_y sqrt(p'_xy) v[x,y]."""
        v = self._as_grid(v)
        return (v * self.sqrt_p).sum(axis=1)

    def apply_b(self, u: np.ndarray) -> np.ndarray:
        """Lift an n-vector: (B u)[x,y] = sqrt(p'_yx) * u[y]."""
        u = np.asarray(u)
        if u.shape != (self.n,):
            raise ValueError(f"expected an n-vector of length {self.n}, got shape {u.shape}")
        return (self.sqrt_p.T * u[None, :]).ravel()

    def apply_b_t(self, v: np.ndarray) -> np.ndarray:
        """Adjoint: (B^T v)[y] = sum_x sqrt(p'_yx) v[x,y]."""
        v = self._as_grid(v)
        return (self.sqrt_p.T * v).sum(axis=0)

    # -- reflections and the one-step operator ------------------------

    def reflect_a_amps(self, amps: np.ndarray) -> np.ndarray:
        return 2.0 * self.apply_a(self.apply_a_t(amps)) - np.ravel(amps)

    def reflect_b_amps(self, amps: np.ndarray) -> np.ndarray:
        return 2.0 * self.apply_b(self.apply_b_t(amps)) - np.ravel(amps)

    def step_amps(self, amps: np.ndarray) -> np.ndarray:
        """One step of U = R_B R_A on a flat amplitude vector."""
        return self.reflect_b_amps(self.reflect_a_amps(amps))

    def reflect_a(self, state: WalkState) -> WalkState:
        return WalkState(self.reflect_a_amps(state.amps), self.n)

    def reflect_b(self, state: WalkState) -> WalkState:
        return WalkState(self.reflect_b_amps(state.amps), self.n)

    def step(self, state: WalkState) -> WalkState:
        return WalkState(self.step_amps(state.amps), self.n)

    # -- dense oracles (small n only) ----------------------------------

    def dense_a(self) -> np.ndarray:
        if self.n > DENSE_AB_LIMIT:
            raise ValueError(f"dense A is limited to n <= {DENSE_AB_LIMIT}")
        n = self.n
        A = np.zeros((n * n, n))
        for x in range(n):
            A[x * n:(x + 1) * n, x] = self.sqrt_p[x]
        return A

    def dense_b(self) -> np.ndarray:
        if self.n > DENSE_AB_LIMIT:
            raise ValueError(f"dense B is limited to n <= {DENSE_AB_LIMIT}")
        n = self.n
        B = np.zeros((n * n, n))
        rows = np.arange(n) * n
        for y in range(n):
            B[rows + y, y] = self.sqrt_p[y]
        return B

    def dense_unitary(self) -> np.ndarray:
        """Materialize U = R_B R_A; n^4 entries, so capped at small n."""
        if self.n > DENSE_U_LIMIT:
            raise ValueError(f"dense U is limited to n <= {DENSE_U_LIMIT}")
        A = self.dense_a()
        B = self.dense_b()
        eye = np.eye(self.n * self.n)
        RA = 2.0 * (A @ A.T) - eye
        RB = 2.0 * (B @ B.T) - eye
        return RB @ RA

    def _as_grid(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.size != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} amplitudes, got {v.size}")
        return v.reshape(self.n, self.n)


def build_operators(chain: AbsorbingChain) -> WalkOperators:
    """Precompute sqrt(p'_xy) once and wrap it in matrix-free operators."""
    return WalkOperators(np.sqrt(chain.Pprime), chain.marked)


def discriminant(chain: AbsorbingChain) -> Discriminant:
    """C_xy = sqrt(p'_xy p'_yx); block-diagonal [P_M, 0; 0, I_m] for the
    complete graph with suffix marking."""
    Pp = chain.Pprime
    return Discriminant(np.sqrt(Pp * Pp.T))
