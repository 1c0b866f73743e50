"""Factor chains ``M/W``: collapse excursions outside ``W`` into single steps.

Factor state ``i`` is parent state ``W[i]``, with ``W`` sorted by parent index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .chain import MarkovChain, default_labels, require_irreducible, validate
from .errors import SubsetTooSmall
from .hitting import WeightMatrix, absorption_stats, mean_hitting_column, weighted_hitting_column


@dataclass(frozen=True, eq=False)
class FactorChain:
    W: tuple[int, ...]
    p_bar: np.ndarray
    v_bar: np.ndarray
    parent_n: int
    parent_labels: tuple[str, ...] | None = None

    def position(self, state: int) -> int:
        """Factor index of parent state ``state``."""
        return self.W.index(state)

    def as_chain(self) -> MarkovChain:
        """The factor chain as an ordinary :class:`MarkovChain` on ``len(W)`` states."""
        if self.parent_labels is not None:
            labels = tuple(self.parent_labels[w] for w in self.W)
        else:
            labels = default_labels(len(self.W))
        return validate(self.p_bar, labels)

    def weights(self) -> WeightMatrix:
        return WeightMatrix(self.v_bar)


def _resolve_subset(chain: MarkovChain, W: Iterable) -> tuple[int, ...]:
    Ws = tuple(sorted({chain.index(w) for w in W}))
    if len(Ws) < 2:
        raise SubsetTooSmall(f"factor subset needs at least 2 distinct states, got {len(Ws)}")
    return Ws


def _arrow_support(chain: MarkovChain, Ws: tuple[int, ...], a: int) -> set[int]:
    """States of ``W`` that some positive-probability arrow from ``a`` can end at."""
    P = chain.P
    inner = set(range(chain.n)) - set(Ws) | {a}
    seen, stack = {a}, [a]
    ends = set()
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(P[u] > 0.0):
            v = int(v)
            if v in inner:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
            else:
                ends.add(v)
    return ends


def _arrow_tables(chain: MarkovChain, Ws: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    k = len(Ws)
    p_bar = np.zeros((k, k))
    v_bar = np.ones((k, k))
    for i, a in enumerate(Ws):
        # a stays transient so arrows may revisit it before reaching W \ {a}
        stats = absorption_stats(chain, [w for w in Ws if w != a])
        # structural zeros stay exact zeros instead of round-off residue
        support = _arrow_support(chain, Ws, a)
        for j, b in enumerate(Ws):
            if b == a or b not in support:
                continue
            # elimination round-off can push q a hair outside [0, 1]
            q = min(max(stats.prob(a, b), 0.0), 1.0)
            p_bar[i, j] = q
            if q > 0.0:
                v_bar[i, j] = stats.length(a, b) / q
    return p_bar, v_bar


def build_factor(chain: MarkovChain, W: Iterable) -> FactorChain:
    """Factor chain of ``chain`` by subset ``W`` with arrow probabilities and arrow weights.

    ``p_bar[a, b]`` is the probability that ``b`` is the first state of
    ``W \\ {a}`` reached from ``a``; ``v_bar[a, b]`` the mean length of those
    excursions, or exactly 1 where ``p_bar`` is 0 and on the diagonal.
    """
    require_irreducible(chain)
    Ws = _resolve_subset(chain, W)
    p_bar, v_bar = _arrow_tables(chain, Ws)
    p_bar.setflags(write=False)
    v_bar.setflags(write=False)
    return FactorChain(Ws, p_bar, v_bar, chain.n, chain.labels)


def arrow_weights(chain: MarkovChain, W: Iterable) -> WeightMatrix:
    return build_factor(chain, W).weights()


def verify_factor_consistency(chain: MarkovChain, W: Iterable, a: int, b: int) -> float:
    """``|H_bar(V_bar, a, b) - H(a, b)|``: factor-chain weighted hitting time vs parent mean hitting time."""
    fc = build_factor(chain, W)
    a, b = chain.index(a), chain.index(b)
    if a == b:
        raise ValueError("a and b must differ")
    if a not in fc.W or b not in fc.W:
        raise ValueError("a and b must belong to W")
    h_bar = weighted_hitting_column(fc.as_chain(), fc.weights(), fc.position(b))[fc.position(a)]
    h = mean_hitting_column(chain, b)[a]
    return abs(float(h_bar) - float(h))
