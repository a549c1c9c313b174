"""
Exceptions raised by the levyhg package.

Every error raised on purpose by the library derives from `LevyHGError`, so that the
command line interface can turn any of them into exit code 1.
"""

from typing import List, Union


class LevyHGError(Exception):
    """
    Base class for all levyhg errors.

    Base class: `Exception`
    """


class PoleError(LevyHGError):
    """
    Raised when a function is evaluated at one of its poles.

    Base class: `LevyHGError`
    """

    def __init__(self, message: str, location: Union[complex, float, None] = None):
        """ """
        super().__init__(message)
        self.location: Union[complex, float, None] = location


class NonConvergence(LevyHGError):
    """
    Raised when a series or an iteration does not reach the requested tolerance.

    Base class: `LevyHGError`
    """


class InadmissibleParameters(LevyHGError):
    """
    Raised when a parameter set lies outside every supported admissibility set.

    Base class: `LevyHGError`
    """

    def __init__(self, message: str, violations: Union[List[str], None] = None):
        """ """
        self.violations: List[str] = violations if violations is not None else []
        if self.violations:
            message = f"{message}: " + "; ".join(self.violations)
        super().__init__(message)


class OutOfStrip(LevyHGError):
    """
    Raised when a Mellin transform is evaluated outside its strip of analyticity.

    Base class: `LevyHGError`
    """


class ContourOutOfStrip(OutOfStrip):
    """
    Raised when an inversion contour does not lie strictly inside the strip.

    Base class: `OutOfStrip`
    """


class DomainError(LevyHGError):
    """
    Raised when an argument lies outside the domain of a function.

    Base class: `LevyHGError`
    """


class NegativeShift(LevyHGError):
    """
    Raised when a transform that needs a non-negative shift receives a negative one.

    Base class: `LevyHGError`
    """


class NotSpecial(LevyHGError):
    """
    Raised when the conjugate of a Bernstein function fails the Bernstein spot check.

    Base class: `LevyHGError`
    """


class Unsupported(LevyHGError):
    """
    Raised when an operation is not defined for the given expression or class.

    Base class: `LevyHGError`
    """


class UnsupportedCase(LevyHGError):
    """
    Raised for parameter cases for which no closed form is implemented.

    Base class: `LevyHGError`
    """


class UnboundedVariation(LevyHGError):
    """
    Raised when a bounded variation formula is applied to a process of unbounded
    variation.

    Base class: `LevyHGError`
    """


class TruncationTooLow(LevyHGError):
    """
    Raised when a truncated contour integral still has a significant integrand at
    its cut-off.

    Base class: `LevyHGError`
    """


class NotInCkl(LevyHGError):
    """
    Raised when a stable process does not belong to the requested class C(k,l).

    Base class: `LevyHGError`
    """


class HorizonTooShort(LevyHGError):
    """
    Raised when too many simulated paths are still running at the end of the
    simulation.

    Base class: `LevyHGError`
    """


class CheckFailed(LevyHGError):
    """
    Raised by the command line interface when a numerical check does not pass.

    Base class: `LevyHGError`
    """
