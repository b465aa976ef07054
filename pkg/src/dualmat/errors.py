"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` that the CLI copies
into its report.
"""


class DualMatError(Exception):
    code = "error"


class NotAppreciable(DualMatError, ZeroDivisionError):
    code = "not_appreciable"


class SingularStandardPart(NotAppreciable):
    code = "singular_standard_part"


class ShapeMismatch(DualMatError, ValueError):
    code = "shape_mismatch"


class ConvergenceFailure(DualMatError, RuntimeError):
    code = "convergence_failure"


class NotIndexOne(DualMatError):
    code = "not_index_one"


class InverseNotExists(DualMatError):
    code = "inverse_not_exists"


class ToleranceBreach(DualMatError):
    """Raised when equivalent existence predicates disagree numerically."""

    code = "tolerance_breach"


class ParseError(DualMatError, ValueError):
    code = "parse_error"
