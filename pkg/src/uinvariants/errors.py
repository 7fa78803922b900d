"""Exception types raised across the package."""


class UInvError(Exception):
    """Base class for all package errors."""


class MissingAssignment(UInvError, KeyError):
    """A polynomial was evaluated at a point that leaves one of its variables unset."""

    def __str__(self):
        return Exception.__str__(self)


class BadOrder(UInvError, ValueError):
    """Minor order outside 1..n."""


class BadIndex(UInvError, ValueError):
    """Generator or slice index outside the valid range."""


class Singular(UInvError, ZeroDivisionError):
    """Matrix determinant is not invertible in the working ring."""


class StructureViolation(UInvError, AssertionError):
    """A restricted generator failed the triangular (affine, lower-variable) shape."""


class DegenerateInput(UInvError, ValueError):
    """Invariant values that cannot come from a matrix of the open stratum."""


class NotInOmega(UInvError, ValueError):
    """Matrix has a vanishing lower-left corner minor.

    ``order`` holds the first k with J_k(A) = 0.
    """

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order
