"""Exception hierarchy shared by every module."""


class HitmetricError(Exception):
    """Base class for all errors raised by hitmetric."""


class ChainSyntaxError(HitmetricError, ValueError):
    """Malformed chain or weight file (bad token, wrong entry count)."""


class ValidationError(HitmetricError, ValueError):
    """A matrix violates the stochastic-matrix invariants."""


class RowSumError(ValidationError):
    def __init__(self, row: int, total: float):
        self.row = row
        self.sum = total
        super().__init__(f"RowSum(row={row}, sum={total!r})")


class NegativeEntryError(ValidationError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"NegativeEntry({i}, {j}): {value!r}")


class EntryAboveOneError(ValidationError):
    def __init__(self, i: int, j: int, value: float):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"EntryAboveOne({i}, {j}): {value!r}")


class NonSquareError(ValidationError):
    pass


class DimensionMismatch(HitmetricError, ValueError):
    pass


class NotIrreducible(HitmetricError):
    def __init__(self, blocking_pair: tuple[int, int] | None = None):
        self.blocking_pair = blocking_pair
        msg = "chain is not irreducible"
        if blocking_pair is not None:
            msg += f": no positive-probability route {blocking_pair[0]} -> {blocking_pair[1]}"
        super().__init__(msg)


class SingularSystem(HitmetricError, ArithmeticError):
    """Pivot fell below the singularity threshold during elimination."""


class SubsetTooSmall(HitmetricError, ValueError):
    pass


class ConcatUndefined(HitmetricError, ValueError):
    pass


class NotDisjoint(HitmetricError, ValueError):
    pass


class KTooSmall(HitmetricError, ValueError):
    pass


class CapacityExceeded(HitmetricError):
    pass


class DegenerateDenominator(HitmetricError, ArithmeticError):
    pass
