"""Small named chains and random irreducible chain generators."""

from __future__ import annotations

import numpy as np

from .chain import MarkovChain, validate
from .metric import ThreeStateInstance


def swap2() -> MarkovChain:
    return validate([[0.0, 1.0], [1.0, 0.0]])


def flip2() -> MarkovChain:
    return validate([[0.5, 0.5], [0.5, 0.5]])


def lazy2() -> MarkovChain:
    return validate([[0.9, 0.1], [0.5, 0.5]])


def cycle3() -> MarkovChain:
    return validate([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])


def uni3() -> MarkovChain:
    return validate([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])


def ring(n: int) -> MarkovChain:
    """Symmetric random walk on the ``n``-cycle."""
    P = np.zeros((n, n))
    for i in range(n):
        P[i, (i + 1) % n] += 0.5
        P[i, (i - 1) % n] += 0.5
    return validate(P)


def ring4() -> MarkovChain:
    return ring(4)


NAMED = {
    "swap2": swap2,
    "flip2": flip2,
    "lazy2": lazy2,
    "cycle3": cycle3,
    "uni3": uni3,
    "ring4": ring4,
}


def random_chain(
    rng: np.random.Generator,
    n: int,
    density: float | None = None,
    low: float = 0.0,
) -> MarkovChain:
    """Random irreducible chain on ``n`` states.

    Entries are drawn uniformly from ``(low, 1]`` on a random sparsity
    pattern, then each row is normalized. A random Hamiltonian cycle is
    always kept in the pattern, which makes the result irreducible.
    """
    if density is None:
        density = rng.uniform(0.1, 1.0)
    mask = rng.random((n, n)) < density
    order = rng.permutation(n)
    if n > 1:
        mask[order, np.roll(order, -1)] = True
    else:
        mask[0, 0] = True
    vals = low + (1.0 - low) * (1.0 - rng.random((n, n)))
    M = np.where(mask, vals, 0.0)
    return validate(M / M.sum(axis=1, keepdims=True))


def random_three_state(rng: np.random.Generator, size: int | None = None, weights: bool = True):
    """Random three-state instances without self-loops; arrays of length ``size`` when given."""
    p_ab, p_ba, p_ca = (rng.uniform(0.0, 1.0, size) for _ in range(3))
    vs = {}
    for name in ("v_ab", "v_ac", "v_ba", "v_bc", "v_ca", "v_cb"):
        vs[name] = rng.uniform(0.05, 10.0, size) if weights else (np.ones(size) if size else 1.0)
    return ThreeStateInstance(p_ab=p_ab, p_ac=1.0 - p_ab, p_ba=p_ba, p_bc=1.0 - p_ba,
                              p_ca=p_ca, p_cb=1.0 - p_ca, **vs)
