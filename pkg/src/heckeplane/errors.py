"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class TruncationError(ValueError):
    """A q-series is not long enough for the requested output."""


class RewriteError(ValueError):
    """A Hecke word cannot be brought to normal form."""


class UnsupportedTransform(NotImplementedError):
    """The image of a distribution atom leaves the closed-form atom class."""
