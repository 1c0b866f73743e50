"""Mean hitting times, factor chains and the hitting-time metric for finite Markov chains."""

from .chain import (
    IrreducibilityWitness,
    MarkovChain,
    distribution_after,
    is_irreducible,
    parse_chain,
    render,
    step_probability,
    validate,
)
from .errors import (
    CapacityExceeded,
    ChainSyntaxError,
    ConcatUndefined,
    DegenerateDenominator,
    DimensionMismatch,
    HitmetricError,
    KTooSmall,
    NegativeEntryError,
    NonSquareError,
    NotDisjoint,
    NotIrreducible,
    RowSumError,
    SingularSystem,
    SubsetTooSmall,
    ValidationError,
)
from .factor import FactorChain, arrow_weights, build_factor, verify_factor_consistency
from .hitting import (
    AbsorptionStats,
    HittingMatrix,
    WeightMatrix,
    absorption_stats,
    mean_hitting_matrix,
    parse_weights,
    weighted_hitting_column,
    weighted_hitting_matrix,
)
from .metric import (
    MetricReport,
    ThreeStateInstance,
    first_hit_certainty,
    metric_matrix,
    reduce_to_three,
    three_state_hitting,
    triangle_gap_g,
)
from .montecarlo import McEstimate, simulate_hitting
from .paths import (
    DecayCertificate,
    Path,
    avoidance_probability,
    concat,
    decay_certificate,
    direct_sum,
    enumerate_arrows,
    extend,
    hv,
    path_probability,
    path_weight,
    pset_probability,
    truncated_hitting,
)

__version__ = "0.1.0"
