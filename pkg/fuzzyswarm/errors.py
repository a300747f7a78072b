"""
Error hierarchy for fuzzyswarm.

Every error is a ValueError so callers that only care about "bad input"
can keep catching that. The CLI maps ``exit_code`` straight to the process
exit status.
"""


class FuzzySwarmError(ValueError):
    """Root of all fuzzyswarm errors (runtime failure, exit 1)."""
    exit_code = 1


# ============ Input / usage errors (exit 2) ============

class InputError(FuzzySwarmError):
    exit_code = 2


class ParseError(InputError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class GapError(InputError):
    pass


class TooShortError(InputError):
    pass


class NonFiniteError(InputError):
    pass


class OutOfRangeError(InputError):
    pass


class TooFewValuesError(InputError):
    pass


class ConfigError(FuzzySwarmError):
    exit_code = 2


# ============ Fuzzification ============

class AllOutliersError(FuzzySwarmError):
    """No consecutive gap survived the one-sigma filter."""


class DegenerateSeriesError(FuzzySwarmError):
    pass


class InvalidSegmentError(FuzzySwarmError):
    pass


class OutOfUniverseError(FuzzySwarmError):
    pass


# ============ Vectors / rules / training ============

class DimensionMismatchError(FuzzySwarmError):
    pass


class NoMatchError(FuzzySwarmError):
    pass


class AmbiguousMatchError(FuzzySwarmError):
    pass


class UntrainableRuleError(FuzzySwarmError):
    pass


# ============ Evaluation / persistence ============

class EmptyInputError(FuzzySwarmError):
    pass


class ZeroActualError(FuzzySwarmError):
    pass


class AlignmentError(FuzzySwarmError):
    pass


class FingerprintMismatchError(FuzzySwarmError):
    pass


class ModelFormatError(FuzzySwarmError):
    pass
