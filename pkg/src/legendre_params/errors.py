"""Exception hierarchy shared by every evaluator in the package."""


class LegendreError(Exception):
    """Base class for evaluation failures."""


class DomainError(LegendreError, ValueError):
    """Argument or parameter outside the region where an evaluator is defined."""


class PoleError(LegendreError, ZeroDivisionError):
    """Evaluation point sits on a pole of a gamma factor (or of the function)."""


class ConvergenceError(LegendreError, ArithmeticError):
    """Series or quadrature did not reach the requested tolerance."""


class EvaluationError(LegendreError, RuntimeError):
    """A user-supplied callable failed inside an oracle."""
