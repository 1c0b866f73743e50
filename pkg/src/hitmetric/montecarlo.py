"""Monte Carlo estimates of hitting times.

Randomness comes from a counter-based generator: the uniform used by trial
``k`` at step ``s`` is a pure function of ``(seed, k, s)``. Trials can
therefore run in any grouping or order and still produce the same values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import MarkovChain, require_irreducible
from .errors import DimensionMismatch
from .hitting import WeightMatrix

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STEP = 0xD1B54A32D192ED03


def _mix64(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def trial_keys(seed: int, trials: np.ndarray) -> np.ndarray:
    """Per-trial stream keys derived from ``(seed, trial index)``."""
    base = np.uint64(seed & _MASK)
    with np.errstate(over="ignore"):
        return _mix64(base + (trials.astype(np.uint64) + np.uint64(1)) * np.uint64(_GOLDEN))


def uniforms(keys: np.ndarray, step: int) -> np.ndarray:
    """Uniform doubles in ``[0, 1)`` for each key at counter value ``step``."""
    with np.errstate(over="ignore"):
        z = _mix64(keys ^ (np.uint64(step & _MASK) * np.uint64(_STEP)))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int


class _Sampler:
    """Successor lookup by linear scan over cumulative row sums."""

    def __init__(self, P: np.ndarray):
        self.cum = np.cumsum(P, axis=1)
        n = P.shape[0]
        self.last_positive = np.array([int(np.flatnonzero(P[i] > 0.0)[-1]) for i in range(n)])

    def next(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        idx = (u[:, None] >= self.cum[states]).sum(axis=1)
        # cumulative sums may fall short of 1; never step past the last positive entry
        return np.minimum(idx, self.last_positive[states])


def simulate_paths(
    chain: MarkovChain,
    a: int,
    b: int,
    trials: int,
    seed: int,
    V: WeightMatrix | None = None,
) -> np.ndarray:
    """Per-trial accumulated length (or weight) of walks from ``a`` until ``b`` is first hit."""
    require_irreducible(chain)
    a, b = chain.index(a), chain.index(b)
    if a == b:
        raise ValueError("a and b must differ")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if V is not None and V.n != chain.n:
        raise DimensionMismatch(f"weight matrix is {V.n}x{V.n}, chain has {chain.n} states")
    sampler = _Sampler(chain.P)
    keys = trial_keys(seed, np.arange(trials))
    state = np.full(trials, a)
    total = np.zeros(trials)
    active = np.arange(trials)
    step = 0
    while active.size:
        cur = state[active]
        nxt = sampler.next(cur, uniforms(keys[active], step))
        total[active] += 1.0 if V is None else V.V[cur, nxt]
        state[active] = nxt
        active = active[nxt != b]
        step += 1
    return total


def simulate_hitting(
    chain: MarkovChain,
    a: int,
    b: int,
    trials: int,
    seed: int,
    V: WeightMatrix | None = None,
) -> McEstimate:
    """Estimate ``H(a, b)`` (or ``H(V, a, b)``) from ``trials`` independent walks."""
    values = simulate_paths(chain, a, b, trials, seed, V)
    mean = math.fsum(values) / trials
    if trials > 1:
        var = math.fsum((values - mean) ** 2) / (trials - 1)
        stderr = math.sqrt(var) / math.sqrt(trials)
    else:
        stderr = 0.0
    return McEstimate(mean, stderr, trials, seed)
