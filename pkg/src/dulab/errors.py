"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2,
NumericalError (and subclasses) -> 3, PostselectionError -> 4.
"""


class DulabError(Exception):
    """Base class for all package errors."""


class ValidationError(DulabError):
    """Bad parameters, shapes, or contract violations detected up front."""


class NumericalError(DulabError):
    """A numerical routine failed or produced out-of-contract results."""


class DegenerateInputError(NumericalError):
    """Rank-deficient input where a generic full-rank matrix was expected."""


class BranchAmbiguityError(NumericalError):
    """Matrix log requested for a matrix with an eigenvalue at -1."""


class PostselectionError(DulabError):
    """Postselection loop exhausted its attempt budget."""

    def __init__(self, message, histogram=None):
        super().__init__(message)
        self.histogram = dict(histogram or {})
