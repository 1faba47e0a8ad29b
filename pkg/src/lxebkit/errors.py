"""Shared exception types."""


class FeasibilityError(ValueError):
    """A desk-scale size guard refused the computation."""
