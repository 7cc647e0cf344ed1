"""Exception hierarchy shared by all hrpot modules."""


class HRPotError(Exception):
    """Base class for all numerical/modelling errors raised by hrpot."""


class NotPositiveDefinite(HRPotError):
    """A matrix expected to be SPD failed the Cholesky pivot check.

    Downstream this usually means a parameter matrix is not a valid
    Hüsler-Reiss matrix (not strictly conditionally negative definite).
    """


class MaxIterationsExceeded(HRPotError):
    """Raised only on explicit request; optimizers normally flag instead."""


class DegenerateColumn(HRPotError):
    pass


class TooFewExceedances(HRPotError):
    def __init__(self, n_found: int, minimum: int):
        super().__init__(f"only {n_found} exceedances found (minimum {minimum})")
        self.n_found = n_found
        self.minimum = minimum


class BlockTooLarge(HRPotError):
    pass


class AccuracyNotReached(HRPotError):
    pass
