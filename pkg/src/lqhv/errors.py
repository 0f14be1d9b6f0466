"""Exception hierarchy shared across the package."""

from __future__ import annotations


class LqhvError(Exception):
    """Base class for all package errors."""


class InputError(LqhvError, ValueError):
    """Malformed or out-of-contract input (shapes, ranges, file contents)."""


class SignalingError(LqhvError):
    """A family failed the nonsignaling consistency check.

    Carries the offending :class:`~lqhv.scenario.Witness` as ``self.witness``.
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"nonsignaling consistency violated on sites {witness.site_subset} "
            f"at common settings {witness.common_settings}: tuples "
            f"{witness.tuple_a} vs {witness.tuple_b} disagree by "
            f"{witness.max_discrepancy}"
        )


class AtomBudgetError(LqhvError):
    """Joint space exceeds the configured atom budget."""


class RepresentationError(LqhvError):
    """A measure reproduces a joint probability below the nonnegativity floor."""
