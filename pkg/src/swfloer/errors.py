"""Shared exception types.

These are raised across modules, so they live in one place.  The split is:
bad input data (DomainError, GenusMismatch), degenerate linear algebra that
a theorem promises cannot happen (SingularMatrix, InconsistentRecursion),
and a cross-checked identity coming out false (VerificationFailure).  The
last three abort loudly on purpose: if one of them fires on valid input,
a mathematical claim this package relies on has been falsified, and no
answer should be returned at all.
"""


class DomainError(ValueError):
    """Parameters outside the meaningful range (genus, degree, level...)."""


class GenusMismatch(ValueError):
    """Two objects built over different surfaces were combined."""


class SingularMatrix(ArithmeticError):
    """A matrix that must be invertible is not."""


class InconsistentRecursion(ArithmeticError):
    """The relation recursion produced no solution, or more than one."""


class VerificationFailure(AssertionError):
    """An independently computed value disagrees with its formula."""
