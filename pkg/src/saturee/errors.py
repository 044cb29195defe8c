"""Shared exception types."""


class NumericalError(RuntimeError):
    """An iterative routine failed to reach its certified tolerance."""
