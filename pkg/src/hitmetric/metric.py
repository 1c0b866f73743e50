"""The commute metric ``rho(a, b) = H(a, b) + H(b, a)`` and the three-state reduction.

The triangle inequality for mean hitting times reduces, via the factor chain
on ``{a, b, c}``, to a closed-form statement about a three-state chain with
no self-loops. :func:`three_state_hitting` and :func:`triangle_gap_g`
evaluate that closed form; :func:`reduce_to_three` produces its inputs from
an arbitrary chain.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .chain import MarkovChain, require_irreducible, validate
from .errors import DegenerateDenominator, ValidationError
from .factor import build_factor
from .hitting import WeightMatrix, absorption_stats, mean_hitting_matrix

TRIPLE_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Triangle:
    a: int
    b: int
    c: int
    slack: float


@dataclass(frozen=True, eq=False)
class MetricReport:
    rho: np.ndarray
    worst_triangle: Triangle | None
    symmetric_ok: bool
    identity_ok: bool
    triangle_ok: bool
    epsilon: float

    @property
    def ok(self) -> bool:
        return self.symmetric_ok and self.identity_ok and self.triangle_ok

    def verdicts(self) -> list[str]:
        lines = [
            f"symmetric: {'yes' if self.symmetric_ok else 'NO'}",
            f"identity: {'yes' if self.identity_ok else 'NO'}",
            f"triangle: {'yes' if self.triangle_ok else 'NO'} (epsilon={self.epsilon:.3g})",
        ]
        if self.worst_triangle is not None:
            t = self.worst_triangle
            lines.append(f"worst triangle: a={t.a} b={t.b} c={t.c} slack={t.slack:.12g}")
        if not self.triangle_ok:
            lines.append("triangle violation found: this is an implementation defect, not a property of the chain")
        return lines


def triangle_slack(D: np.ndarray) -> Triangle | None:
    """``min D[a,b] + D[b,c] - D[a,c]`` over distinct ordered triples.

    Ties go to the lexicographically smallest ``(a, b, c)``; ``None`` when
    there are fewer than three states.
    """
    n = D.shape[0]
    if n < 3:
        return None
    S = D[:, :, None] + D[None, :, :] - D[:, None, :]
    idx = np.arange(n)
    distinct = (idx[:, None, None] != idx[None, :, None]) & (idx[None, :, None] != idx[None, None, :]) & (
        idx[:, None, None] != idx[None, None, :]
    )
    S = np.where(distinct, S, np.inf)
    flat = int(np.argmin(S))
    a, b, c = np.unravel_index(flat, S.shape)
    return Triangle(int(a), int(b), int(c), float(S[a, b, c]))


def metric_matrix(chain: MarkovChain) -> MetricReport:
    """Hitting-time metric with quantified verdicts on the metric axioms.

    The triangle tolerance is ``epsilon = 1e-9 * (1 + max rho)``. A failing
    triangle check is reported as-is, never repaired.
    """
    H = mean_hitting_matrix(chain).H
    rho = H + H.T
    epsilon = 1e-9 * (1.0 + float(rho.max()))
    off = ~np.eye(chain.n, dtype=bool)
    identity_ok = bool(np.all(np.diag(rho) == 0.0) and np.all(rho[off] > 0.0))
    symmetric_ok = bool(np.array_equal(rho, rho.T))
    worst = triangle_slack(rho)
    triangle_ok = worst is None or worst.slack >= -epsilon
    return MetricReport(rho, worst, symmetric_ok, identity_ok, bool(triangle_ok), epsilon)


# -- three-state closed form ---------------------------------------------------------

@dataclass(frozen=True)
class ThreeStateInstance:
    """Three-state chain without self-loops, plus positive transition weights.

    Fields may be floats or equally shaped arrays (a batch of instances).
    """

    p_ab: float
    p_ac: float
    p_ba: float
    p_bc: float
    p_ca: float
    p_cb: float
    v_ab: float = 1.0
    v_ac: float = 1.0
    v_ba: float = 1.0
    v_bc: float = 1.0
    v_ca: float = 1.0
    v_cb: float = 1.0

    def __post_init__(self):
        for pair in (("p_ab", "p_ac"), ("p_ba", "p_bc"), ("p_ca", "p_cb")):
            x, y = (np.asarray(getattr(self, f), dtype=float) for f in pair)
            if np.any(x < 0) or np.any(y < 0):
                raise ValidationError(f"negative probability in {pair}")
            if np.any(np.abs(x + y - 1.0) > TRIPLE_SUM_TOL):
                raise ValidationError(f"{pair[0]} + {pair[1]} must equal 1")
        for f in fields(self):
            if f.name.startswith("v_") and np.any(np.asarray(getattr(self, f.name)) <= 0):
                raise ValidationError(f"{f.name} must be positive")

    @classmethod
    def from_matrices(cls, P: np.ndarray, V: np.ndarray | None = None) -> "ThreeStateInstance":
        """Read off-diagonal entries of 3x3 matrices, states ordered ``(a, b, c)``."""
        V = np.ones((3, 3)) if V is None else V
        off = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
        return cls(*(float(P[k]) for k in off), *(float(V[k]) for k in off))

    def transition_matrix(self) -> np.ndarray:
        return np.array([
            [0.0, self.p_ab, self.p_ac],
            [self.p_ba, 0.0, self.p_bc],
            [self.p_ca, self.p_cb, 0.0],
        ])

    def weight_matrix(self) -> np.ndarray:
        return np.array([
            [1.0, self.v_ab, self.v_ac],
            [self.v_ba, 1.0, self.v_bc],
            [self.v_ca, self.v_cb, 1.0],
        ])

    def as_chain(self) -> tuple[MarkovChain, WeightMatrix]:
        return validate(self.transition_matrix(), ("a", "b", "c")), WeightMatrix(self.weight_matrix())


def _denominators(s: ThreeStateInstance):
    d_ab = 1.0 - s.p_ab * s.p_ba
    d_ac = 1.0 - s.p_ac * s.p_ca
    if np.any(np.asarray(d_ab) <= 0.0) or np.any(np.asarray(d_ac) <= 0.0):
        raise DegenerateDenominator("1 - p_ab p_ba and 1 - p_ac p_ca must be positive (instance is reducible)")
    return d_ab, d_ac


def three_state_hitting(s: ThreeStateInstance):
    """Weighted hitting times ``(H_ac, H_ab, H_bc)`` of the three-state chain in closed form."""
    d_ab, d_ac = _denominators(s)
    h_ac = (s.v_ac * s.p_ac + s.p_ab * s.v_ab + s.p_ab * (s.v_bc * s.p_bc + s.p_ba * s.v_ba)) / d_ab
    h_ab = (s.v_ab * s.p_ab + s.p_ac * s.v_ac + s.p_ac * (s.v_cb * s.p_cb + s.p_ca * s.v_ca)) / d_ac
    h_bc = (s.v_bc * s.p_bc + s.p_ba * s.v_ba + s.p_ba * (s.v_ac * s.p_ac + s.p_ab * s.v_ab)) / d_ab
    return h_ac, h_ab, h_bc


def triangle_gap_g(s: ThreeStateInstance):
    """Cleared-denominator triangle gap as a linear form in the weights.

    Every coefficient is a product of probabilities and factors
    ``1 - p p``, so the value is non-negative for any valid instance, and
    ``g / ((1 - p_ab p_ba)(1 - p_ac p_ca)) == H_ab + H_bc - H_ac``.
    """
    d_ab, d_ac = _denominators(s)
    c_ab = (s.p_ba * s.p_ac + s.p_ac * s.p_ca * s.p_bc) * s.p_ab
    c_ac = (s.p_ba * s.p_ac + s.p_ac * s.p_ca * s.p_bc) * s.p_ac
    c_ba = d_ac * s.p_ba * s.p_ac
    c_bc = d_ac * s.p_bc * s.p_ac
    c_ca = d_ab * s.p_ac * s.p_ca
    c_cb = d_ab * s.p_ac * s.p_cb
    return (s.v_ab * c_ab + s.v_ac * c_ac + s.v_ba * c_ba
            + s.v_bc * c_bc + s.v_ca * c_ca + s.v_cb * c_cb)


def triangle_gap_raw(s: ThreeStateInstance):
    """The same gap before the linear-form rearrangement (difference of two weighted sums)."""
    d_ab, d_ac = _denominators(s)
    n_bc = s.v_bc * s.p_bc + s.p_ba * s.v_ba + s.p_ba * (s.v_ac * s.p_ac + s.p_ab * s.v_ab)
    n_ac = s.v_ac * s.p_ac + s.p_ab * s.v_ab + s.p_ab * (s.v_bc * s.p_bc + s.p_ba * s.v_ba)
    n_ab = s.v_ab * s.p_ab + s.p_ac * s.v_ac + s.p_ac * (s.v_cb * s.p_cb + s.p_ca * s.v_ca)
    return d_ac * (n_bc - n_ac) + d_ab * n_ab


def reduce_to_three(chain: MarkovChain, a: int, b: int, c: int):
    """Factor ``chain`` by ``{a, b, c}`` and evaluate the closed form on the result.

    Returns ``(instance, H_ac, H_ab, H_bc)``; each value should match the
    parent chain's mean hitting time.
    """
    a, b, c = chain.index(a), chain.index(b), chain.index(c)
    if len({a, b, c}) != 3:
        raise ValueError("a, b, c must be distinct")
    fc = build_factor(chain, (a, b, c))
    order = [fc.position(s) for s in (a, b, c)]
    P = fc.p_bar[np.ix_(order, order)]
    V = fc.v_bar[np.ix_(order, order)]
    # rows of p_bar sum to 1 within solver round-off; pin the pair sums exactly
    P = P.copy()
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        if P[i, j] >= P[i, k]:
            P[i, k] = 1.0 - P[i, j]
        else:
            P[i, j] = 1.0 - P[i, k]
    inst = ThreeStateInstance.from_matrices(P, V)
    h_ac, h_ab, h_bc = three_state_hitting(inst)
    return inst, float(h_ac), float(h_ab), float(h_bc)


def first_hit_certainty(chain: MarkovChain, a: int, c: int) -> float:
    """Probability that the chain started at ``a`` ever reaches ``c`` (1 when irreducible)."""
    require_irreducible(chain)
    a, c = chain.index(a), chain.index(c)
    if a == c:
        raise ValueError("a and c must differ")
    return absorption_stats(chain, [c]).prob(a, c)
