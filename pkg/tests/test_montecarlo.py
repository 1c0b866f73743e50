import numpy as np
import pytest

from hitmetric import catalog
from hitmetric.chain import validate
from hitmetric.errors import DimensionMismatch, NotIrreducible
from hitmetric.hitting import WeightMatrix, mean_hitting_matrix, weighted_hitting_column
from hitmetric.montecarlo import _Sampler, simulate_hitting, simulate_paths, trial_keys, uniforms


def test_swap2_deterministic(swap2):
    est = simulate_hitting(swap2, 0, 1, 100, seed=123)
    assert (est.mean, est.stderr, est.trials, est.seed) == (1.0, 0.0, 100, 123)


def test_cycle3_deterministic(cycle3):
    est = simulate_hitting(cycle3, 0, 2, 50, seed=9)
    assert est.mean == 2.0 and est.stderr == 0.0


def test_flip2_statistical(flip2):
    est = simulate_hitting(flip2, 0, 1, 10**5, seed=42)
    assert abs(est.mean - 2.0) <= 4 * est.stderr
    # geometric(1/2) has variance 2
    assert est.stderr == pytest.approx(np.sqrt(2 / 10**5), rel=0.05)


def test_weighted_estimate(rng):
    chain = catalog.random_chain(rng, 5, low=0.05)
    V = WeightMatrix(rng.uniform(0.5, 3.0, (5, 5)))
    exact = weighted_hitting_column(chain, V, 4)[0]
    est = simulate_hitting(chain, 0, 4, 20000, seed=5, V=V)
    assert abs(est.mean - exact) <= 4 * est.stderr


def test_single_trial_has_zero_stderr(flip2):
    assert simulate_hitting(flip2, 0, 1, 1, seed=0).stderr == 0.0


def test_reproducible_bytes(ring4):
    a = simulate_paths(ring4, 0, 2, 5000, seed=2**64 - 1)
    b = simulate_paths(ring4, 0, 2, 5000, seed=2**64 - 1)
    assert a.tobytes() == b.tobytes()
    assert simulate_paths(ring4, 0, 2, 5000, seed=1).tobytes() != a.tobytes()


def test_trial_streams_independent_of_batch_size(rng):
    chain = catalog.random_chain(rng, 6)
    small = simulate_paths(chain, 0, 3, 300, seed=77)
    large = simulate_paths(chain, 0, 3, 1000, seed=77)
    np.testing.assert_array_equal(small, large[:300])


def test_uniforms_range_and_purity():
    keys = trial_keys(11, np.arange(10000))
    u = uniforms(keys, 3)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.02
    np.testing.assert_array_equal(uniforms(keys[5:9], 3), u[5:9])
    assert not np.array_equal(uniforms(keys, 4), u)


def test_clamps_to_last_positive_entry():
    # row 0 sums to 1 - 5e-10, so a uniform above that would overrun into the zero column
    P = np.array([[0.0, 1.0 - 5e-10, 0.0], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
    sampler = _Sampler(P)
    assert sampler.next(np.array([0, 0]), np.array([0.0, 1.0 - 1e-12])).tolist() == [1, 1]
    assert sampler.next(np.array([1, 1]), np.array([0.49, 0.51])).tolist() == [0, 2]


def test_matches_solver_on_random_chains(rng):
    for _ in range(5):
        chain = catalog.random_chain(rng, int(rng.integers(3, 7)), low=0.05)
        H = mean_hitting_matrix(chain).H
        est = simulate_hitting(chain, 0, chain.n - 1, 20000, seed=int(rng.integers(2**63)))
        assert abs(est.mean - H[0, chain.n - 1]) <= 4 * est.stderr


def test_errors(flip2):
    with pytest.raises(ValueError):
        simulate_hitting(flip2, 0, 0, 10, seed=1)
    with pytest.raises(ValueError):
        simulate_hitting(flip2, 0, 1, 0, seed=1)
    with pytest.raises(DimensionMismatch):
        simulate_hitting(flip2, 0, 1, 10, seed=1, V=WeightMatrix.trivial(3))
    with pytest.raises(NotIrreducible):
        simulate_hitting(validate([[1, 0], [0, 1]]), 0, 1, 10, seed=1)
