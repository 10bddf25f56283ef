"""Exception hierarchy shared by the pricing, hedging and CLI layers."""


class GameHedgeError(Exception):
    """Base class for every error raised by this package."""


class QuadratureError(GameHedgeError, ArithmeticError):
    pass


class SubdivisionLimit(QuadratureError):
    """Adaptive integration ran out of panels before meeting its tolerance."""


class NonFinite(QuadratureError):
    """An integrand produced inf or nan inside the integration domain."""


class DegenerateMaturity(GameHedgeError, ValueError):
    """An analytic formula was asked to price at (or too close to) maturity."""


class SolverError(GameHedgeError):
    pass


class TrivialOption(SolverError):
    """Expected payoff is below the price floor; the option is worthless."""


class SingularJacobian(SolverError):
    pass


class NoConvergence(SolverError):
    pass


class DegenerateDenominator(SolverError):
    pass


class HedgeError(GameHedgeError):
    """A weekly pricing step failed; ``week`` records where."""

    def __init__(self, week: int, cause: Exception):
        self.week = week
        self.cause = cause
        super().__init__(f"week {week}: {type(cause).__name__}: {cause}")
