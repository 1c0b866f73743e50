"""Random finite path sets for the path-algebra tests."""

from hitmetric.paths import Path


def random_path(rng, n, length, start=None):
    start = int(rng.integers(n)) if start is None else start
    return Path([start] + [int(s) for s in rng.integers(0, n, length)])


def random_set(rng, n, size, max_len=5):
    return frozenset(random_path(rng, n, int(rng.integers(0, max_len + 1))) for _ in range(size))


def fixed_length_set(rng, n, start, length, size):
    return frozenset(random_path(rng, n, length, start) for _ in range(size))


def first_visit_set(rng, n, start, junction, size, max_len=5):
    """Paths from ``start`` whose only visit to ``junction`` is their last state.

    Sets of this kind factor uniquely when concatenated, so the product rules apply.
    """
    others = [s for s in range(n) if s != junction]
    out = set()
    for _ in range(size):
        length = int(rng.integers(1, max_len + 1))
        mid = [int(rng.choice(others)) for _ in range(length - 1)]
        out.add(Path([start] + mid + [junction]))
    return frozenset(out)


def concat_chain(rng, n, folds, size, max_len=4):
    """``folds`` sets, consecutive ones compatible, the last one unrestricted after its start."""
    junctions = [int(rng.integers(n))]
    for _ in range(folds - 1):
        junctions.append(int(rng.choice([s for s in range(n) if s != junctions[-1]])))
    sets = []
    start = int(rng.choice([s for s in range(n) if s != junctions[0]]))
    for j in junctions:
        sets.append(first_visit_set(rng, n, start, j, size, max_len))
        start = j
    tail = frozenset(random_path(rng, n, int(rng.integers(0, max_len + 1)), start) for _ in range(size))
    sets.append(tail)
    return sets


def random_weights(rng, n):
    return rng.uniform(0.1, 2.0, (n, n))


def split_disjoint(rng, X):
    X = sorted(X)
    mask = rng.random(len(X)) < 0.5
    return frozenset(x for x, m in zip(X, mask) if m), frozenset(x for x, m in zip(X, mask) if not m)

