"""Brute-force ground truth built from explicit paths and path sets.

Nothing here solves a linear system: probabilities and hitting sums are
obtained by summing over paths, either one by one or grouped by length.
These are the reference values the solver modules are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .chain import MarkovChain, require_irreducible
from .errors import CapacityExceeded, ConcatUndefined, KTooSmall, NotDisjoint
from .hitting import WeightMatrix

MAX_PATHS = 10**6


@dataclass(frozen=True, order=True)
class Path:
    """A sequence of states ``(x_0, ..., x_m)``; its length is ``m``."""

    states: tuple[int, ...]

    def __init__(self, states: Iterable[int]):
        states = tuple(int(s) for s in states)
        if not states:
            raise ValueError("a path has at least one state")
        object.__setattr__(self, "states", states)

    @property
    def length(self) -> int:
        return len(self.states) - 1

    @property
    def begin(self) -> int:
        return self.states[0]

    @property
    def end(self) -> int:
        return self.states[-1]

    def __matmul__(self, other: "Path") -> "Path":
        if self.end != other.begin:
            raise ConcatUndefined(f"path ends at {self.end} but next begins at {other.begin}")
        return Path(self.states + other.states[1:])

    def __repr__(self) -> str:
        return f"Path{self.states}"


PathSet = frozenset  # frozenset[Path]


def path_set(*paths: Sequence[int] | Path) -> frozenset[Path]:
    return frozenset(p if isinstance(p, Path) else Path(p) for p in paths)


def _check_capacity(count: int) -> None:
    if count > MAX_PATHS:
        raise CapacityExceeded(f"path set would hold {count} paths (limit {MAX_PATHS})")


def _check_path(chain: MarkovChain, x: Path) -> None:
    if any(not 0 <= s < chain.n for s in x.states):
        raise ValueError(f"{x!r} has states outside 0..{chain.n - 1}")


# -- path functionals ----------------------------------------------------------

def path_probability(chain: MarkovChain, x: Path) -> float:
    """Product of the one-step transition probabilities along ``x``; 1 for a single state."""
    _check_path(chain, x)
    P = chain.P
    prob = 1.0
    for u, v in zip(x.states, x.states[1:]):
        prob *= P[u, v]
    return float(prob)


def path_weight(V: WeightMatrix, x: Path) -> float:
    """Sum of the transition weights along ``x``; 0 for a single state."""
    return float(sum(V.V[u, v] for u, v in zip(x.states, x.states[1:])))


def hv(chain: MarkovChain, V: WeightMatrix, X: Iterable[Path]) -> float:
    """``sum_x Weight(V, x) * P(x)`` over the set ``X``."""
    return math.fsum(path_weight(V, x) * path_probability(chain, x) for x in sorted(X))


def pset_probability(chain: MarkovChain, X: Iterable[Path]) -> float:
    return math.fsum(path_probability(chain, x) for x in sorted(X))


# -- set algebra -------------------------------------------------------------

def concat(X: Iterable[Path], Y: Iterable[Path]) -> frozenset[Path]:
    """``{x @ y}`` for all pairs, defined only if one state ends all of ``X`` and begins all of ``Y``.

    The product laws for probability and weight assume each result has a single
    factorization, e.g. when every path of ``X`` meets the junction only at its end.
    """
    X, Y = list(X), list(Y)
    ends = {x.end for x in X}
    begins = {y.begin for y in Y}
    if len(ends | begins) > 1:
        raise ConcatUndefined(f"no shared junction: ends {sorted(ends)}, begins {sorted(begins)}")
    _check_capacity(len(X) * len(Y))
    return frozenset(x @ y for x in X for y in Y)


def concat_all(sets: Sequence[Iterable[Path]]) -> frozenset[Path]:
    """Left fold of :func:`concat` over two or more sets."""
    if len(sets) < 2:
        raise ValueError("need at least two sets")
    return reduce(concat, (frozenset(s) for s in sets))


def direct_sum(X: Iterable[Path], Y: Iterable[Path]) -> frozenset[Path]:
    X, Y = frozenset(X), frozenset(Y)
    common = X & Y
    if common:
        raise NotDisjoint(f"sets share {len(common)} path(s), e.g. {min(common)!r}")
    return X | Y


def extend(chain: MarkovChain, X: Iterable[Path], k: int) -> frozenset[Path]:
    """All length-``k`` extensions of the paths in ``X`` over every state.

    Zero-probability extensions are included; the set is combinatorial.
    """
    X = frozenset(X)
    if X and k < max(x.length for x in X):
        raise KTooSmall(f"k={k} is shorter than the longest path in the set")
    _check_capacity(sum(chain.n ** (k - x.length) for x in X))
    out = set()
    for x in X:
        frontier = [x.states]
        for _ in range(k - x.length):
            frontier = [s + (z,) for s in frontier for z in range(chain.n)]
        out.update(Path(s) for s in frontier)
    return frozenset(out)


def enumerate_arrows(chain: MarkovChain, W: Iterable[int], a: int, b: int, max_len: int) -> frozenset[Path]:
    """Positive-probability ``W``-arrows from ``a`` to ``b`` of length at most ``max_len``.

    An arrow ends at ``b`` and, before its last step, visits no state of ``W``
    other than ``a``.
    """
    W = {chain.index(w) for w in W}
    a, b = chain.index(a), chain.index(b)
    if len(W) < 2:
        raise ValueError("W must contain at least two states")
    if a == b or a not in W or b not in W:
        raise ValueError("a and b must be distinct members of W")
    P = chain.P
    allowed = [u for u in range(chain.n) if u not in W or u == a]
    out: list[Path] = []
    stack = [(a,)]
    while stack:
        s = stack.pop()
        u = s[-1]
        if len(s) - 1 >= max_len:
            continue
        if P[u, b] > 0.0:
            out.append(Path(s + (b,)))
            _check_capacity(len(out))
        for v in allowed:
            if P[u, v] > 0.0:
                stack.append(s + (v,))
    return frozenset(out)


def enumerate_first_passage(chain: MarkovChain, a: int, b: int, max_len: int) -> frozenset[Path]:
    """Positive-probability paths from ``a`` that reach ``b`` only at their end."""
    return enumerate_arrows(chain, {a, b}, a, b, max_len)


# -- truncated series --------------------------------------------------------

@dataclass(frozen=True)
class DecayCertificate:
    """From any state, some path of length ``<= t`` with probability ``>= q`` reaches ``target``.

    Consequently the chance of avoiding ``target`` for ``m`` steps is at most
    ``(1 - q) ** (m // t)``.
    """

    target: int
    t: int
    q: float

    def bound(self, m: int) -> float:
        return (1.0 - self.q) ** (m // self.t)

    @property
    def beta(self) -> float:
        """Per-step decay rate ``(1 - q) ** (1 / t)``."""
        return (1.0 - self.q) ** (1.0 / self.t)


def decay_certificate(chain: MarkovChain, w: int) -> DecayCertificate:
    """Shortest positive routes to ``w`` from every other state.

    ``t`` is the longest of those shortest route lengths; ``q`` the smallest,
    over start states, of the best probability achieved by a shortest route.
    """
    require_irreducible(chain)
    w = chain.index(w)
    P = chain.P
    n = chain.n
    dist = np.full(n, -1)
    best = np.zeros(n)
    dist[w], best[w] = 0, 1.0
    layer = [w]
    d = 0
    while layer:
        d += 1
        nxt = []
        for u in range(n):
            if dist[u] >= 0:
                continue
            cands = [P[u, v] * best[v] for v in layer if P[u, v] > 0.0]
            if cands:
                dist[u] = d
                best[u] = max(cands)
                nxt.append(u)
        layer = nxt
    others = [u for u in range(n) if u != w]
    if not others:
        return DecayCertificate(w, 1, 1.0)
    t = int(max(dist[u] for u in others))
    q = float(min(best[u] for u in others))
    return DecayCertificate(w, t, q)


def avoidance_probability(chain: MarkovChain, a: int, w: int, m: int) -> float:
    """Probability that the first ``m`` steps from ``a`` (start included) never visit ``w``."""
    a, w = chain.index(a), chain.index(w)
    if m < 0:
        raise ValueError("m must be non-negative")
    if a == w:
        return 0.0
    keep = [u for u in range(chain.n) if u != w]
    Q = chain.P[np.ix_(keep, keep)]
    Qm = np.linalg.matrix_power(Q, m)
    return float(Qm[keep.index(a)].sum())


def _first_passage_masses(chain: MarkovChain, a: int, b: int, max_len: int) -> np.ndarray:
    # mass[m] = total probability of paths a -> b of length m meeting b only at the end
    keep = [u for u in range(chain.n) if u != b]
    Q = chain.P[np.ix_(keep, keep)]
    into_b = chain.P[keep, b]
    row = np.zeros(len(keep))
    row[keep.index(a)] = 1.0
    mass = np.zeros(max_len + 1)
    for m in range(1, max_len + 1):
        mass[m] = row @ into_b
        row = row @ Q
    return mass


def truncated_hitting(chain: MarkovChain, a: int, b: int, max_len: int) -> tuple[float, float, float]:
    """Partial sums of the first-passage series from ``a`` to ``b`` up to length ``max_len``.

    Returns ``(prob_lower, h_lower, tail_prob_bound)``: the probability and the
    length-weighted probability of first-passage paths no longer than
    ``max_len``, and the decay-certificate bound on the missing probability.
    Paths are grouped by length, each group's mass being the avoidance
    vector pushed one step into ``b``.
    """
    require_irreducible(chain)
    a, b = chain.index(a), chain.index(b)
    if a == b:
        raise ValueError("a and b must differ")
    mass = _first_passage_masses(chain, a, b, max_len)
    prob_lower = math.fsum(mass)
    h_lower = math.fsum(m * mass[m] for m in range(len(mass)))
    tail = decay_certificate(chain, b).bound(max_len)
    return prob_lower, h_lower, tail


def hitting_tail_bound(chain: MarkovChain, b: int, max_len: int) -> float:
    """Upper bound on ``H(a, b) - h_lower`` for every start ``a`` and truncation ``max_len``.

    Uses ``P(tau = m) <= (1 - q) ** ((m - 1) // t)`` and sums
    ``m * (1 - q) ** ((m - 1) // t)`` over ``m > max_len`` in closed form.
    """
    cert = decay_certificate(chain, b)
    t, beta = cert.t, 1.0 - cert.q
    L = max_len
    # m in block k covers m - 1 in [k t, k t + t - 1]
    K = L // t
    total = 0.0
    for m in range(L + 1, (K + 1) * t + 1):
        total += m * beta ** ((m - 1) // t)
    if beta == 0.0:
        return total
    if beta >= 1.0:
        return math.inf
    k0 = K + 1
    geo = beta**k0 / (1.0 - beta)
    kgeo = beta**k0 * (k0 * (1.0 - beta) + beta) / (1.0 - beta) ** 2
    total += t * t * kgeo + t * (t + 1) / 2.0 * geo
    return total


def truncated_arrows(
    chain: MarkovChain, W: Iterable[int], a: int, max_len: int
) -> tuple[dict[int, float], dict[int, float], float]:
    """Length-grouped partial sums of the ``W``-arrow probabilities out of ``a``.

    Returns ``(prob_lower, h_lower, tail_bound)`` where ``prob_lower[b]`` sums
    the probability of arrows ``a -> b`` of length ``<= max_len``, ``h_lower[b]``
    the length-weighted version, and ``tail_bound`` caps the probability of not
    having reached ``W \\ {a}`` within ``max_len`` steps.
    """
    require_irreducible(chain)
    Ws = sorted({chain.index(w) for w in W})
    a = chain.index(a)
    if len(Ws) < 2 or a not in Ws:
        raise ValueError("W must hold at least two states including a")
    targets = [w for w in Ws if w != a]
    inner = [u for u in range(chain.n) if u not in targets]
    Q = chain.P[np.ix_(inner, inner)]
    R = chain.P[np.ix_(inner, targets)]
    row = np.zeros(len(inner))
    row[inner.index(a)] = 1.0
    masses = np.zeros((max_len + 1, len(targets)))
    for m in range(1, max_len + 1):
        masses[m] = row @ R
        row = row @ Q
    lengths = np.arange(max_len + 1)
    prob = {b: math.fsum(masses[:, j]) for j, b in enumerate(targets)}
    hsum = {b: math.fsum(lengths * masses[:, j]) for j, b in enumerate(targets)}
    tail = min(decay_certificate(chain, c).bound(max_len) for c in targets)
    return prob, hsum, tail
