"""Exception hierarchy.

Each class carries a short machine-readable ``code`` that the CLI prints
and maps to an exit status.
"""


class PolymultError(Exception):
    code = "error"


class ParseError(PolymultError, ValueError):
    code = "parse-error"


class InadmissibleSystemError(PolymultError):
    code = "inadmissible-system"


class ResourceLimitError(PolymultError):
    code = "resource-limit"


class DomainError(PolymultError, ValueError):
    code = "domain-error"


class NoConvergenceError(PolymultError):
    code = "no-convergence"


class NotConvergedError(PolymultError):
    code = "not-converged"


class NearSingularError(PolymultError):
    code = "near-singular-Q"


class MismatchedSystemError(PolymultError):
    code = "mismatched-system"


class BasisMismatchError(PolymultError):
    code = "basis-mismatch"
