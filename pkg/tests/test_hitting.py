import numpy as np
import pytest

from hitmetric import catalog
from hitmetric.chain import validate
from hitmetric.errors import DimensionMismatch, NotIrreducible, SingularSystem, ValidationError
from hitmetric.hitting import (
    WeightMatrix,
    absorption_stats,
    mean_hitting_matrix,
    parse_weights,
    weighted_hitting_column,
    weighted_hitting_matrix,
)


def fundamental_matrix_hitting(P):
    """Hitting times from the stationary law and the fundamental matrix (independent route)."""
    n = P.shape[0]
    w, vl = np.linalg.eig(P.T)
    pi = np.real(vl[:, np.argmin(np.abs(w - 1.0))])
    pi = pi / pi.sum()
    Z = np.linalg.inv(np.eye(n) - P + np.outer(np.ones(n), pi))
    return (np.diag(Z)[None, :] - Z) / pi[None, :]


class TestMeanHitting:
    def test_swap2(self, swap2):
        np.testing.assert_array_equal(mean_hitting_matrix(swap2).H, [[0, 1], [1, 0]])

    def test_cycle3(self, cycle3):
        H = mean_hitting_matrix(cycle3).H
        assert (H[0, 1], H[0, 2], H[1, 0]) == (1, 2, 2)

    def test_lazy2(self, lazy2):
        H = mean_hitting_matrix(lazy2).H
        # h = 1 + 0.9 h  and  h = 1 + 0.5 h
        assert H[0, 1] == pytest.approx(10.0, abs=1e-12)
        assert H[1, 0] == pytest.approx(2.0, abs=1e-12)

    def test_ring4(self, ring4):
        H = mean_hitting_matrix(ring4).H
        assert H[0, 1] == pytest.approx(3.0, abs=1e-12)
        assert H[0, 2] == pytest.approx(4.0, abs=1e-12)

    def test_single_state(self):
        np.testing.assert_array_equal(mean_hitting_matrix(validate([[1.0]])).H, [[0.0]])

    def test_rejects_reducible(self):
        with pytest.raises(NotIrreducible):
            mean_hitting_matrix(validate([[1, 0], [0, 1]]))

    def test_near_reducible_singular(self):
        eps = 1e-14
        chain = validate([[1 - eps, eps], [eps, 1 - eps]])
        with pytest.raises(SingularSystem):
            mean_hitting_matrix(chain)

    def test_diagonal_exact_zero_and_properties(self, rng):
        for _ in range(50):
            chain = catalog.random_chain(rng, int(rng.integers(2, 13)))
            H = mean_hitting_matrix(chain).H
            n = chain.n
            assert np.all(np.diag(H) == 0.0)
            off = ~np.eye(n, dtype=bool)
            assert np.all(np.isfinite(H)) and np.all(H[off] >= 1.0 - 1e-12)
            # one-step consistency
            P = chain.P
            for j in range(n):
                for i in range(n):
                    if i == j:
                        continue
                    rhs = 1.0 + sum(P[i, k] * H[k, j] for k in range(n) if k != j)
                    assert abs(H[i, j] - rhs) < 1e-9 * (1 + H.max())

    def test_matches_fundamental_matrix(self, rng):
        for _ in range(30):
            chain = catalog.random_chain(rng, int(rng.integers(2, 10)), low=0.05)
            H = mean_hitting_matrix(chain).H
            np.testing.assert_allclose(H, fundamental_matrix_hitting(chain.P), rtol=1e-8, atol=1e-9)


class TestWeighted:
    def test_single_forced_transition(self, swap2):
        V = WeightMatrix([[1, 3], [1, 1]])
        assert weighted_hitting_column(swap2, V, 1)[0] == 3.0

    def test_trivial_weights_match(self, rng):
        for _ in range(30):
            chain = catalog.random_chain(rng, int(rng.integers(2, 12)))
            H = mean_hitting_matrix(chain).H
            E = WeightMatrix.trivial(chain.n)
            for b in range(chain.n):
                col = weighted_hitting_column(chain, E, b)
                np.testing.assert_allclose(col, H[:, b], rtol=1e-12, atol=0)

    def test_linear_scaling(self, flip2):
        V = WeightMatrix.trivial(2).scaled(2.0)
        assert weighted_hitting_column(flip2, V, 1)[0] == pytest.approx(4.0, abs=1e-12)

    def test_linearity_in_weights(self, rng):
        chain = catalog.random_chain(rng, 6)
        V1 = WeightMatrix(rng.uniform(0.1, 3, (6, 6)))
        V2 = WeightMatrix(rng.uniform(0.1, 3, (6, 6)))
        V12 = WeightMatrix(V1.V + V2.V)
        H1, H2, H12 = (weighted_hitting_matrix(chain, V).H for V in (V1, V2, V12))
        np.testing.assert_allclose(H12, H1 + H2, rtol=1e-12)

    def test_dimension_mismatch(self, flip2):
        with pytest.raises(DimensionMismatch):
            weighted_hitting_column(flip2, WeightMatrix.trivial(3), 0)

    def test_weights_must_be_positive(self):
        with pytest.raises(ValidationError):
            WeightMatrix([[1, 0], [1, 1]])

    def test_parse_weights(self):
        V = parse_weights("2\n1 3\n5 1\n")
        np.testing.assert_array_equal(V.V, [[1, 3], [5, 1]])


class TestAbsorption:
    def test_ring4_single_target(self, ring4):
        s = absorption_stats(ring4, [2])
        assert s.prob(0, 2) == pytest.approx(1.0, abs=1e-12)
        assert s.length(0, 2) == pytest.approx(4.0, abs=1e-12)

    def test_cycle3(self, cycle3):
        s = absorption_stats(cycle3, [2])
        assert s.prob(0, 2) == 1.0 and s.length(0, 2) == 2.0

    def test_uni3_split(self, uni3):
        s = absorption_stats(uni3, [1, 2])
        for b in (1, 2):
            assert s.prob(0, b) == pytest.approx(0.5, abs=1e-15)
            assert s.length(0, b) == pytest.approx(0.5, abs=1e-15)

    def test_rows_sum_to_one_and_ranges(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 12))
            chain = catalog.random_chain(rng, n)
            k = int(rng.integers(1, n))
            A = rng.choice(n, size=k, replace=False)
            s = absorption_stats(chain, A)
            np.testing.assert_allclose(s.q.sum(axis=1), 1.0, atol=1e-9)
            assert np.all(s.q >= -1e-15) and np.all(s.q <= 1 + 1e-12)
            assert np.all(s.m >= -1e-15)

    def test_single_target_length_is_hitting_time(self, rng):
        chain = catalog.random_chain(rng, 7)
        H = mean_hitting_matrix(chain).H
        s = absorption_stats(chain, [3])
        for u in s.transient:
            assert s.length(u, 3) == pytest.approx(H[u, 3], rel=1e-12)

    def test_transient_domain_must_be_complement(self, uni3):
        with pytest.raises(ValueError):
            absorption_stats(uni3, [1], transient=[0])
        with pytest.raises(ValueError):
            absorption_stats(uni3, [1], transient=[0, 1, 2])
        s = absorption_stats(uni3, [1], transient=[0, 2])
        assert s.transient == (0, 2)

    def test_empty_target_rejected(self, uni3):
        with pytest.raises(ValueError):
            absorption_stats(uni3, [])
