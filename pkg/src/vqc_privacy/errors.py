"""Exception types shared across the package."""


class VqcPrivacyError(Exception):
    """Base class; ``code`` is the reason string written into reports."""

    code = "error"


class QubitMismatch(VqcPrivacyError, ValueError):
    code = "qubit_mismatch"


class DenseCapExceeded(VqcPrivacyError, ValueError):
    code = "dense_cap_exceeded"


class DimBudgetExceeded(VqcPrivacyError):
    code = "dim_budget_exceeded"


class SupportBudgetExceeded(VqcPrivacyError):
    code = "support_budget_exceeded"


class NotInAlgebra(VqcPrivacyError, ValueError):
    code = "not_in_algebra"


class GeneratorNotInDla(NotInAlgebra):
    code = "generator_not_in_dla"


class ObservableNotInDla(NotInAlgebra):
    code = "observable_not_in_dla"


class DimensionMismatch(VqcPrivacyError, ValueError):
    code = "dimension_mismatch"


class Underdetermined(VqcPrivacyError):
    code = "underdetermined"


class RankDeficient(VqcPrivacyError):
    code = "rank_deficient"

    def __init__(self, msg, rank=None, dim=None):
        super().__init__(msg)
        self.rank = rank
        self.dim = dim


class PivotZero(VqcPrivacyError):
    code = "pivot_zero"


class NullspaceDim(VqcPrivacyError):
    code = "nullspace_dim"

    def __init__(self, msg, nullity=None):
        super().__init__(msg)
        self.nullity = nullity


class DomainError(VqcPrivacyError, ValueError):
    """arccos argument outside [-1, 1] by more than the clamp tolerance."""

    code = "domain_error"


class DegreeBudgetExceeded(VqcPrivacyError):
    code = "degree_budget_exceeded"


class CoefficientBlowup(VqcPrivacyError):
    code = "coefficient_blowup"


class NoRealSolution(VqcPrivacyError):
    code = "no_real_solution"


class BudgetExceeded(VqcPrivacyError):
    code = "budget_exceeded"

    def __init__(self, msg, projected_calls=None):
        super().__init__(msg)
        self.projected_calls = projected_calls


class ZeroGradient(VqcPrivacyError, ValueError):
    code = "zero_gradient"


class SingularSystem(VqcPrivacyError, ValueError):
    code = "singular_system"


class ConfigError(VqcPrivacyError, ValueError):
    code = "config_error"
