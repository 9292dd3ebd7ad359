"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range where a closed form is valid."""


class ShapeError(ValueError):
    """Block vectors and Jordan data disagree on segment counts or lengths."""


class IdentityViolation(ArithmeticError):
    """Two exact routes to the same quantity disagreed.

    Only raised in exact mode, where such a mismatch is a bug rather than
    rounding noise.
    """
