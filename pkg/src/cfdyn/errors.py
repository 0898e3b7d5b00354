"""Exception types shared across the package."""


class CfDynError(Exception):
    """Base class for all package errors."""


class ParseError(CfDynError, ValueError):
    def __init__(self, text, token=None):
        self.text = text
        self.token = token if token is not None else text
        super().__init__(f"cannot parse complex literal {text!r}: offending token {self.token!r}")


class PoleError(CfDynError, ZeroDivisionError):
    """A Moebius map was evaluated at its pole."""


class OriginError(CfDynError, ValueError):
    """An operation undefined at z = 0 received z = 0."""


class DiagonalError(CfDynError, ValueError):
    """The natural extension is undefined on the diagonal z = w."""


class BoundaryAmbiguous(CfDynError, ValueError):
    """A float point lies within the boundary tolerance of a circline."""


class EmptyRegionInBox(CfDynError, ValueError):
    """Rejection sampling found no interior point of a region."""


class NonTermination(CfDynError, RuntimeError):
    """An iteration exceeded its provable step budget."""


class NoStabilization(CfDynError, RuntimeError):
    pass


class BudgetExhausted(CfDynError, RuntimeError):
    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class CFDivisionByZero(CfDynError, ZeroDivisionError):
    def __init__(self, depth):
        self.depth = depth
        super().__init__(f"division by zero at depth {depth} of the continued fraction")
