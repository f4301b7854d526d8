"""Exception types raised across the toolkit."""


class Ac4xError(Exception):
    """Base class for toolkit errors."""


class NotUnitSelfDual(Ac4xError, ValueError):
    pass


class NotAntiInvariant(Ac4xError, ValueError):
    pass


class NotSelfDual(Ac4xError, ValueError):
    pass


class DegreeOutOfRange(Ac4xError, ValueError):
    pass


class NotClosed(Ac4xError, ValueError):
    pass


class ModelMismatch(Ac4xError, ValueError):
    pass


class SingularFrequency(Ac4xError, ArithmeticError):
    pass


class NormViolation(Ac4xError, ValueError):
    pass


class NotTaming(Ac4xError, ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SectionDegenerate(Ac4xError, ValueError):
    pass


class RankDeficient(Ac4xError, ArithmeticError):
    pass


class IdenticallyPlusMinus(Ac4xError, ValueError):
    pass


class NonConvergence(Ac4xError, RuntimeError):
    def __init__(self, message, iterations=None, residuals=None):
        super().__init__(message)
        self.iterations = iterations
        self.residuals = residuals


class PositivityLoss(Ac4xError, RuntimeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BreakdownAt(Ac4xError, RuntimeError):
    """Continuation stopped at parameter ``t``; ``solutions`` holds the prior ones."""

    def __init__(self, t, reason, solutions=()):
        super().__init__(f"continuation broke down at t={t}: {reason}")
        self.t = t
        self.reason = reason
        self.solutions = list(solutions)
