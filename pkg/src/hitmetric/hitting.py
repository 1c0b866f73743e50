"""Mean and weighted hitting times, and first-hit statistics over a target set.

Every quantity is the unique solution of a nonsingular linear system on the
states outside the target; irreducibility is checked up front, which makes
the unique solution the minimal non-negative one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import linalg
from .chain import MarkovChain, parse_matrix_document, require_irreducible
from .errors import DimensionMismatch, ValidationError


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Strictly positive per-transition weights ``V``."""

    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=np.float64, copy=True)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise ValidationError(f"weight matrix must be square, got shape {V.shape}")
        if not np.all(np.isfinite(V)) or np.any(V <= 0.0):
            i, j = np.argwhere(~(np.isfinite(V) & (V > 0.0)))[0]
            raise ValidationError(f"weight ({i}, {j}) = {V[i, j]!r} is not a positive real")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @classmethod
    def trivial(cls, n: int) -> "WeightMatrix":
        """The all-ones matrix, under which a path's weight is its length."""
        return cls(np.ones((n, n)))

    @property
    def n(self) -> int:
        return self.V.shape[0]

    def scaled(self, c: float) -> "WeightMatrix":
        return WeightMatrix(c * self.V)


def parse_weights(text: str) -> WeightMatrix:
    """Read a weight matrix from the chain file format (labels are ignored)."""
    M, _ = parse_matrix_document(text)
    return WeightMatrix(M)


@dataclass(frozen=True, eq=False)
class HittingMatrix:
    """``H[a, b]``: expected steps (or expected weight) from ``a`` until ``b`` is first reached."""

    H: np.ndarray
    weighted: bool = False

    def __getitem__(self, key):
        return self.H[key]


@dataclass(frozen=True, eq=False)
class AbsorptionStats:
    """First-hit statistics of a target set ``A``.

    ``q[k, l]`` is the probability that, started from ``transient[k]``, the
    first state of ``A`` visited is ``targets[l]``; ``m[k, l]`` is the expected
    path length up to that visit times the indicator that it is ``targets[l]``.
    """

    targets: tuple[int, ...]
    transient: tuple[int, ...]
    q: np.ndarray
    m: np.ndarray

    def prob(self, u: int, b: int) -> float:
        return float(self.q[self.transient.index(u), self.targets.index(b)])

    def length(self, u: int, b: int) -> float:
        return float(self.m[self.transient.index(u), self.targets.index(b)])


def _check_weights(chain: MarkovChain, V: WeightMatrix) -> None:
    if V.n != chain.n:
        raise DimensionMismatch(f"weight matrix is {V.n}x{V.n}, chain has {chain.n} states")


def _column(P: np.ndarray, b: int, step_cost: np.ndarray) -> np.ndarray:
    keep = np.flatnonzero(np.arange(P.shape[0]) != b)
    A = np.eye(len(keep)) - P[np.ix_(keep, keep)]
    h = np.zeros(P.shape[0])
    if len(keep):
        h[keep] = linalg.solve(A, step_cost[keep])
    return h


def mean_hitting_matrix(chain: MarkovChain) -> HittingMatrix:
    """Solve ``h_jj = 0``, ``h_ij = 1 + sum_{k != j} p_ik h_kj`` for every target ``j``."""
    require_irreducible(chain)
    ones = np.ones(chain.n)
    H = np.column_stack([_column(chain.P, j, ones) for j in range(chain.n)])
    return HittingMatrix(H, weighted=False)


def mean_hitting_column(chain: MarkovChain, b: int) -> np.ndarray:
    require_irreducible(chain)
    return _column(chain.P, chain.index(b), np.ones(chain.n))


def weighted_hitting_column(chain: MarkovChain, V: WeightMatrix, b: int) -> np.ndarray:
    """Expected accumulated weight ``H(V, a, b)`` for every start ``a``.

    One-step decomposition of the path sum: ``h_b = 0`` and, for ``a != b``,
    ``h_a = sum_k p_ak v_ak + sum_{k != b} p_ak h_k``.
    """
    require_irreducible(chain)
    _check_weights(chain, V)
    cost = (chain.P * V.V).sum(axis=1)
    return _column(chain.P, chain.index(b), cost)


def weighted_hitting_matrix(chain: MarkovChain, V: WeightMatrix) -> HittingMatrix:
    require_irreducible(chain)
    _check_weights(chain, V)
    cost = (chain.P * V.V).sum(axis=1)
    H = np.column_stack([_column(chain.P, j, cost) for j in range(chain.n)])
    return HittingMatrix(H, weighted=True)


def absorption_stats(
    chain: MarkovChain,
    targets: Iterable[int],
    transient: Iterable[int] | None = None,
) -> AbsorptionStats:
    """First-hit distribution ``q`` and length-weighted companion ``m`` for target set ``A``.

    ``q`` solves ``(I - Q) q = R`` and ``m`` solves ``(I - Q) m = R + Q q``,
    where ``Q`` is the transient block of ``P`` and ``R`` the transient-to-target
    block. The transient domain defaults to the complement of ``A``.
    """
    require_irreducible(chain)
    A = tuple(sorted({chain.index(b) for b in targets}))
    if not A:
        raise ValueError("target set must be non-empty")
    if transient is None:
        T = tuple(u for u in range(chain.n) if u not in A)
    else:
        T = tuple(sorted({chain.index(u) for u in transient}))
        if set(T) & set(A):
            raise ValueError("transient domain must be disjoint from the target set")
        if set(T) | set(A) != set(range(chain.n)):
            raise ValueError("transient domain must be the complement of the target set")
    if not T:
        empty = np.zeros((0, len(A)))
        return AbsorptionStats(A, T, empty, empty.copy())

    Q = chain.P[np.ix_(T, T)]
    R = chain.P[np.ix_(T, A)]
    I_Q = np.eye(len(T)) - Q
    q = linalg.solve(I_Q, R)
    m = linalg.solve(I_Q, R + Q @ q)
    return AbsorptionStats(A, T, q, m)
