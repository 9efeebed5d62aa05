"""Exception types shared across the library.

Every failure mode raised by the public API derives from :class:`AsqError`,
so callers can catch one base class.  Validation problems (bad input data,
bad parameters) and structural problems (requests the algorithms cannot
honor) each carry enough context to report the offending value.
"""

from __future__ import annotations


class AsqError(Exception):
    """Base class for all library errors."""


class Empty(AsqError):
    """The input vector has no entries."""


class NonFinite(AsqError):
    """An input entry is NaN or infinite."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"non-finite entry {value!r} at index {index}")


class STooSmall(AsqError):
    """A codebook of fewer than 2 levels was requested."""

    def __init__(self, s: int):
        self.s = s
        super().__init__(f"need at least 2 quantization levels, got s={s}")


class DimensionTooSmall(AsqError):
    """The solver needs at least 2 entries."""

    def __init__(self, d: int):
        self.d = d
        super().__init__(f"need at least 2 entries, got d={d}")


class IndexOutOfRange(AsqError):
    """An interval-cost query used indices outside the valid range."""

    def __init__(self, k: int, j: int, lo: int, hi: int):
        self.k = k
        self.j = j
        super().__init__(f"need {lo} <= k <= j <= {hi}, got k={k}, j={j}")


class DegenerateRange(AsqError):
    """All entries are equal, so no grid can be built over [min, max]."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"degenerate range: all entries equal {value!r}")


class NonPositiveWeight(AsqError):
    """A weight is zero, negative, or non-finite."""

    def __init__(self, index: int, weight: float):
        self.index = index
        self.weight = weight
        super().__init__(f"weight {weight!r} at index {index} is not strictly positive")


class CandidatesMissingExtremes(AsqError):
    """The candidate level set does not cover the input's min and max."""


class TooLargeForExhaustive(AsqError):
    """Exhaustive enumeration is only available for tiny instances."""

    def __init__(self, d: int, s: int):
        super().__init__(f"exhaustive search is limited to d <= 16, s <= 6; got d={d}, s={s}")


class OutOfCodebookRange(AsqError):
    """An entry lies outside [levels[0], levels[-1]] by more than float drift."""

    def __init__(self, x: float, lo: float, hi: float):
        self.x = x
        super().__init__(f"entry {x!r} outside codebook range [{lo!r}, {hi!r}]")


class ZeroNorm(AsqError):
    """vNMSE is undefined for the all-zero vector."""


class BadParameters(AsqError):
    """Distribution parameters are invalid (e.g. non-positive variance)."""
