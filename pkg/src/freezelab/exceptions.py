"""Exception hierarchy shared by all freezelab modules."""


class FreezelabError(Exception):
    """Base class for every error raised by freezelab."""


class InvalidInputError(FreezelabError, ValueError):
    """Parameters or arrays that violate an operation's preconditions."""


class DomainError(FreezelabError, ValueError):
    """A point or matrix outside the mathematical domain of an operation.

    Raised for points on the boundary of a Weyl chamber or half space,
    non positive definite matrices, and non positive Gamma arguments.
    """


class NumericError(FreezelabError, ArithmeticError):
    """An iterative routine failed to converge within its budget."""
