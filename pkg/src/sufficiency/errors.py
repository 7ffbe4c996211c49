"""Exception hierarchy.

Every error raised on bad input is a ``ValueError`` subclass so callers can
catch broadly; the narrower classes name the violated precondition.
"""

from __future__ import annotations


class SufficiencyError(Exception):
    """Base class for all package errors."""


class InputError(SufficiencyError, ValueError):
    """Invalid user-supplied data."""


class EmptyInput(InputError):
    pass


class ScoreOutOfRange(InputError):
    pass


class NonPositiveWeight(InputError):
    pass


class WeightSumError(InputError):
    """Weights sum too far from one to be rounding noise."""


class DegenerateSupport(InputError):
    """Fewer than two distinct scores remain after merging."""


class MuOutOfRange(InputError):
    pass


class POutOfRange(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class DegeneratePair(InputError):
    """Objective undefined because ``p == q``."""


class InfeasiblePair(InputError):
    """The requested (p, q) is outside a group's feasible region."""

    def __init__(self, message: str, group: int | None = None):
        super().__init__(message)
        self.group = group


class EmptyIntersection(SufficiencyError):
    """The two group regions share no nondegenerate pair."""


class UnknownScore(InputError, KeyError):
    def __str__(self):  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class EmptyBinInCalibrationSplit(InputError):
    pass


class InsufficientData(InputError):
    pass


class GridTooLarge(InputError):
    pass


class VerificationFailure(SufficiencyError):
    """A closed-form result disagrees with the brute-force oracle."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair
