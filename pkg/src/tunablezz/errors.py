"""Exception types shared across the package."""

from __future__ import annotations


class PoleError(ValueError):
    """A perturbative denominator is too close to zero to evaluate.

    Carries the name of the offending denominator and its value in rad/s.
    """

    def __init__(self, denominator: str, value: float):
        self.denominator = denominator
        self.value = value
        super().__init__(
            f"denominator '{denominator}' is {value / (2.0 * 3.141592653589793):.3g} Hz, "
            "too close to a pole"
        )


class HybridizationError(ValueError):
    """A computational bare state cannot be assigned to a dressed state.

    Raised when the maximum-overlap label of a required bare state falls
    below 0.5, i.e. near an avoided crossing where the ZZ readout from
    state labels is unreliable.  ``overlaps`` maps bare occupation tuples
    to the overlap of their assigned eigenvector.
    """

    def __init__(self, overlaps: dict):
        self.overlaps = dict(overlaps)
        worst = min(overlaps, key=overlaps.get)
        super().__init__(
            f"state {worst} is hybridized (overlap {overlaps[worst]:.3f} < 0.5); "
            f"all overlaps: { {k: round(v, 4) for k, v in overlaps.items()} }"
        )


class ReadoutCorrectionError(ValueError):
    """The combined readout-correction matrix is singular or ill-conditioned."""

    def __init__(self, condition_number: float, limit: float):
        self.condition_number = condition_number
        super().__init__(
            f"readout correction matrix condition number {condition_number:.3g} "
            f"exceeds limit {limit:.3g}"
        )


class RBFitError(RuntimeError):
    """The exponential fit of a benchmarking decay curve failed.

    The raw curve is attached so the caller can inspect what was fitted.
    """

    def __init__(self, message: str, lengths, means):
        self.lengths = list(lengths)
        self.means = list(means)
        super().__init__(f"{message}; raw curve attached (lengths={self.lengths})")


class ChannelInvariantError(RuntimeError):
    """A channel produced an output violating trace/Hermiticity/positivity."""


class DeviceFileError(ValueError):
    """A device parameter file failed to parse or validate."""
