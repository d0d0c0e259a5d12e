"""Symmetric Markov chains, marked-vertex absorption, and the reduced matrix.

Vertices are labeled 1..n in the public API; storage is 0-based internally.
All chains are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

ROW_SUM_TOL = 1e-12
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class MarkovChain:
    """Symmetric stochastic matrix over n vertices plus a marked-vertex set.

    Invariants enforced at construction: every row of P sums to 1 within
    1e-12, P is symmetric within 1e-12, and the marked set is a proper
    subset of {1..n} stored sorted.
    """

    n: int
    P: np.ndarray
    marked: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 vertices, got n={self.n}")
        P = np.asarray(self.P, dtype=float)
        if P.shape != (self.n, self.n):
            raise ValueError(f"P must be {self.n}x{self.n}, got {P.shape}")
        if np.any(P < 0) or np.any(P > 1):
            raise ValueError("transition probabilities must lie in [0, 1]")
        row_err = np.max(np.abs(P.sum(axis=1) - 1.0))
        if row_err >= ROW_SUM_TOL:
            raise ValueError(f"rows of P must sum to 1 (max deviation {row_err:g})")
        sym_err = np.max(np.abs(P - P.T))
        if sym_err >= SYMMETRY_TOL:
            raise ValueError(f"P must be symmetric (max asymmetry {sym_err:g})")
        marked = tuple(sorted(set(int(v) for v in self.marked)))
        if marked and (marked[0] < 1 or marked[-1] > self.n):
            raise ValueError(f"marked vertices must lie in 1..{self.n}, got {marked}")
        if len(marked) >= self.n:
            raise ValueError("cannot mark every vertex")
        P = P.copy()
        P.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "marked", marked)

    @property
    def m(self) -> int:
        return len(self.marked)

    @property
    def marked_idx(self) -> np.ndarray:
        """0-based indices of the marked vertices."""
        return np.asarray(self.marked, dtype=int) - 1

    @property
    def unmarked_idx(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        if self.marked:
            mask[self.marked_idx] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True)
class AbsorbingChain:
    """Chain with all outgoing edges of marked vertices replaced by self-loops."""

    n: int
    Pprime: np.ndarray
    marked: tuple[int, ...]

    def __post_init__(self):
        Pp = np.asarray(self.Pprime, dtype=float)
        if Pp.shape != (self.n, self.n):
            raise ValueError(f"P' must be {self.n}x{self.n}, got {Pp.shape}")
        row_err = np.max(np.abs(Pp.sum(axis=1) - 1.0))
        if row_err >= ROW_SUM_TOL:
            raise ValueError(f"rows of P' must sum to 1 (max deviation {row_err:g})")
        for v in self.marked:
            row = np.zeros(self.n)
            row[v - 1] = 1.0
            if not np.array_equal(Pp[v - 1], row):
                raise ValueError(f"marked vertex {v} must carry an identity row")
        Pp = Pp.copy()
        Pp.setflags(write=False)
        object.__setattr__(self, "Pprime", Pp)
        object.__setattr__(self, "marked", tuple(sorted(self.marked)))

    @property
    def m(self) -> int:
        return len(self.marked)

    @property
    def marked_idx(self) -> np.ndarray:
        return np.asarray(self.marked, dtype=int) - 1

    @property
    def unmarked_idx(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        if self.marked:
            mask[self.marked_idx] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True)
class ReducedMatrix:
    """Transition matrix restricted to the unmarked vertices."""

    dim: int
    PM: np.ndarray

    def __post_init__(self):
        PM = np.asarray(self.PM, dtype=float)
        if PM.shape != (self.dim, self.dim):
            raise ValueError(f"reduced matrix must be {self.dim}x{self.dim}")
        PM = PM.copy()
        PM.setflags(write=False)
        object.__setattr__(self, "PM", PM)


def complete_graph(n: int) -> MarkovChain:
    """Uniform walk on the complete graph: p_xy = (1 - delta_xy)/(n - 1)."""
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    P = (np.ones((n, n)) - np.eye(n)) / (n - 1)
    return MarkovChain(n=n, P=P)


def mark_last(chain: MarkovChain, m: int) -> MarkovChain:
    """Mark the last m vertices {n-m+1, ..., n}."""
    if not 0 <= m < chain.n:
        raise ValueError(f"marked count must satisfy 0 <= m < n, got m={m}, n={chain.n}")
    return MarkovChain(chain.n, chain.P, tuple(range(chain.n - m + 1, chain.n + 1)))


def mark_vertices(chain: MarkovChain, vertices: Iterable[int]) -> MarkovChain:
    """Mark an arbitrary vertex subset (stored sorted)."""
    return MarkovChain(chain.n, chain.P, tuple(vertices))


def relabel_marked_last(chain: MarkovChain) -> tuple[MarkovChain, np.ndarray]:
    """Permute vertex labels so the marked vertices come last.

    Returns the relabeled chain and the permutation ``perm`` with
    ``perm[new] = old`` (0-based). Walk quantities are invariant under
    this relabeling, so block-structured results apply to any marked set.
    """
    perm = np.concatenate([chain.unmarked_idx, chain.marked_idx])
    P = chain.P[np.ix_(perm, perm)]
    m = chain.m
    new_marked = tuple(range(chain.n - m + 1, chain.n + 1))
    return MarkovChain(chain.n, P, new_marked), perm


def absorb(chain: MarkovChain | AbsorbingChain) -> AbsorbingChain:
    """Replace each marked row by the identity row; unmarked rows unchanged.

    Accepts an already-absorbed chain, in which case the result is equal
    (absorption is idempotent).
    """
    P = chain.P if isinstance(chain, MarkovChain) else chain.Pprime
    Pp = P.copy()
    if chain.m:
        idx = chain.marked_idx
        Pp[idx, :] = 0.0
        Pp[idx, idx] = 1.0
    return AbsorbingChain(chain.n, Pp, chain.marked)


def reduced(chain: MarkovChain) -> ReducedMatrix:
    """Restrict P to the unmarked rows and columns."""
    if chain.m == 0:
        raise ValueError("nothing to remove: the marked set is empty")
    keep = chain.unmarked_idx
    return ReducedMatrix(len(keep), chain.P[np.ix_(keep, keep)])


def load_chain(source: str | Path | dict) -> MarkovChain:
    """Build a chain from a JSON descriptor (path or dict).

    Schema: ``{"n": int, "graph": "complete", "marked": [ints]}``.
    """
    if isinstance(source, (str, Path)):
        descriptor = json.loads(Path(source).read_text(encoding="utf-8"))
    else:
        descriptor = dict(source)
    if "n" not in descriptor:
        raise ValueError("chain descriptor must contain 'n'")
    kind = descriptor.get("graph", "complete")
    if kind != "complete":
        raise ValueError(f"unsupported graph kind {kind!r} (only 'complete')")
    chain = complete_graph(int(descriptor["n"]))
    marked = descriptor.get("marked", [])
    if marked:
        chain = mark_vertices(chain, marked)
    return chain
