"""Exception types shared across the package."""


class DomainError(ArithmeticError):
    """An expression was evaluated outside its natural domain."""


class ParseError(ValueError):
    """Base class for expression parsing failures.

    ``offset`` is the byte offset into the UTF-8 encoded source, or None.
    """

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at byte {offset})")
        self.offset = offset


class ExprSyntaxError(ParseError):
    pass


class MultipleVariablesError(ParseError):
    pass


class NonConstantExponentError(ParseError):
    pass


class DerivativeZero(ArithmeticError):
    """|f'(x)| fell to or below the derivative floor."""

    def __init__(self, x: float, d1: float):
        super().__init__(f"derivative {d1!r} at x={x!r} is below the floor")
        self.x = x
        self.d1 = d1


class NoSignChangeError(ValueError):
    pass


class PreconditionError(ValueError):
    pass
