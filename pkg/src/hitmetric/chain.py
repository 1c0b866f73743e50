"""Finite Markov chains: parsing, validation, irreducibility and evolution.

States are dense indices ``0..n-1``; labels exist only for presentation.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ChainSyntaxError,
    EntryAboveOneError,
    NegativeEntryError,
    NonSquareError,
    NotIrreducible,
    RowSumError,
    ValidationError,
)

ROW_SUM_TOL = 1e-9

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_COUNT = re.compile(r"\d+\Z")


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Validated row-stochastic transition matrix with state labels.

    Build through :func:`validate` or :func:`parse_chain`; the constructor
    performs the same checks. ``P`` is stored as a read-only float64 copy.
    """

    P: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        P = np.array(self.P, dtype=np.float64, copy=True)
        labels = tuple(str(s) for s in self.labels)
        _check_stochastic(P)
        if len(labels) != P.shape[0]:
            raise ValidationError(f"expected {P.shape[0]} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ValidationError("state labels must be unique")
        P.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def index(self, state: int | str) -> int:
        """Resolve a label or an index to a state index."""
        if isinstance(state, str):
            if state in self.labels:
                return self.labels.index(state)
            raise KeyError(f"unknown state label {state!r}")
        i = int(state)
        if not 0 <= i < self.n:
            raise IndexError(f"state {i} out of range for n={self.n}")
        return i

    def __repr__(self) -> str:
        return f"MarkovChain(n={self.n}, labels={self.labels!r})"


@dataclass(frozen=True)
class IrreducibilityWitness:
    irreducible: bool
    blocking_pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.irreducible


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _check_stochastic(P: np.ndarray) -> None:
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NonSquareError(f"transition matrix must be square, got shape {P.shape}")
    if P.shape[0] < 1:
        raise NonSquareError("transition matrix must have at least one state")
    if not np.all(np.isfinite(P)):
        i, j = np.argwhere(~np.isfinite(P))[0]
        raise ValidationError(f"non-finite entry at ({i}, {j})")
    neg = np.argwhere(P < 0.0)
    if len(neg):
        i, j = (int(k) for k in neg[0])
        raise NegativeEntryError(i, j, float(P[i, j]))
    big = np.argwhere(P > 1.0)
    if len(big):
        i, j = (int(k) for k in big[0])
        raise EntryAboveOneError(i, j, float(P[i, j]))
    sums = P.sum(axis=1)
    for i, s in enumerate(sums):
        if abs(s - 1.0) > ROW_SUM_TOL:
            raise RowSumError(i, float(s))


def validate(P, labels: Sequence[str] | None = None) -> MarkovChain:
    """Check the stochastic-matrix invariants and wrap ``P``.

    Entries are never renormalized; a row off by more than ``1e-9`` raises
    :class:`RowSumError`.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NonSquareError(f"transition matrix must be square, got shape {P.shape}")
    if labels is None:
        labels = default_labels(P.shape[0])
    return MarkovChain(P, tuple(labels))


# -- file format -------------------------------------------------------------

def parse_matrix_document(text: str) -> tuple[np.ndarray, tuple[str, ...] | None]:
    """Tokenize a chain/weight document into an ``n x n`` array and labels.

    Only syntax is checked here; semantic validation is left to the caller.
    """
    labels = None
    tokens: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@labels"):
            if tokens:
                raise ChainSyntaxError(f"line {lineno}: @labels must precede the matrix")
            if labels is not None:
                raise ChainSyntaxError(f"line {lineno}: duplicate @labels header")
            parts = line.split()
            if parts[0] != "@labels":
                raise ChainSyntaxError(f"line {lineno}: unknown directive {parts[0]!r}")
            labels = tuple(parts[1:])
            continue
        tokens.extend(line.split())

    if not tokens:
        raise ChainSyntaxError("empty document: expected state count")
    if not _COUNT.match(tokens[0]):
        raise ChainSyntaxError(f"invalid state count {tokens[0]!r}")
    n = int(tokens[0])
    if n < 1:
        raise ChainSyntaxError("state count must be >= 1")
    body = tokens[1:]
    if len(body) != n * n:
        raise ChainSyntaxError(f"expected {n * n} matrix entries for n={n}, got {len(body)}")
    for tok in body:
        if not _REAL.match(tok):
            raise ChainSyntaxError(f"invalid real {tok!r}")
    if labels is not None and len(labels) != n:
        raise ChainSyntaxError(f"@labels lists {len(labels)} names for n={n}")
    M = np.array([float(t) for t in body], dtype=np.float64).reshape(n, n)
    return M, labels


def parse_chain(text: str) -> MarkovChain:
    """Parse a chain document, then validate it."""
    M, labels = parse_matrix_document(text)
    return validate(M, labels)


def render_matrix(M: np.ndarray, labels: Sequence[str] | None = None) -> str:
    lines = []
    if labels is not None:
        lines.append("@labels " + " ".join(labels))
    lines.append(str(M.shape[0]))
    for row in M:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def render(chain: MarkovChain) -> str:
    """Serialize ``chain`` so that ``parse_chain(render(chain))`` is bit-exact."""
    labels = None if chain.labels == default_labels(chain.n) else chain.labels
    return render_matrix(chain.P, labels)


# -- structure ---------------------------------------------------------------

def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u] & ~seen):
            seen[v] = True
            queue.append(int(v))
    return seen


def is_irreducible(chain: MarkovChain) -> IrreducibilityWitness:
    """Decide strong connectivity of the positivity pattern ``P > 0``.

    Forward and backward searches from state 0 suffice: the graph is strongly
    connected iff every state is reachable from 0 and reaches 0.
    """
    adj = chain.P > 0.0
    fwd = _reachable(adj, 0)
    if not fwd.all():
        return IrreducibilityWitness(False, (0, int(np.flatnonzero(~fwd)[0])))
    bwd = _reachable(adj.T, 0)
    if not bwd.all():
        return IrreducibilityWitness(False, (int(np.flatnonzero(~bwd)[0]), 0))
    return IrreducibilityWitness(True, None)


def require_irreducible(chain: MarkovChain) -> None:
    w = is_irreducible(chain)
    if not w.irreducible:
        raise NotIrreducible(w.blocking_pair)


# -- evolution ---------------------------------------------------------------

def distribution_after(chain: MarkovChain, lam0, m: int) -> np.ndarray:
    """Return ``lam0 @ P^m`` by ``m`` successive vector-matrix products."""
    lam = np.asarray(lam0, dtype=np.float64)
    if lam.shape != (chain.n,):
        raise ValidationError(f"distribution must have {chain.n} entries")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > ROW_SUM_TOL:
        raise ValidationError("distribution must be non-negative and sum to 1")
    if m < 0:
        raise ValueError("m must be non-negative")
    for _ in range(m):
        lam = lam @ chain.P
    return lam


def step_probability(chain: MarkovChain, i: int, j: int, m: int) -> float:
    """Entry ``(i, j)`` of ``P^m``: the chance of being at ``j`` after ``m`` steps from ``i``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    row = np.zeros(chain.n)
    row[chain.index(i)] = 1.0
    for _ in range(m):
        row = row @ chain.P
    return float(row[chain.index(j)])
