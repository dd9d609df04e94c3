"""Error types raised by burnside-induction.

Mathematical verdicts (axiom failures, non-generation, non-exactness) are
returned as reports. Exceptions are reserved for misuse and for requests
that cannot be carried out.
"""

from typing import Any


class BurnsideError(ValueError):
    """Base class for every error raised by this package."""


class ConfigError(BurnsideError):
    """Inconsistent run configuration."""


class GroupSpecError(BurnsideError):
    """Malformed group, G-set, family or map specification."""


class CapExceededError(BurnsideError):
    """A configured size cap would be exceeded."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} has size {size}, exceeding the cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class GroupAxiomError(BurnsideError):
    """A multiplication table violates the group axioms."""


class SiteMismatchError(BurnsideError):
    """Objects live over different groups or different G-sets."""


class ShapeMismatchError(BurnsideError):
    """Matrix shapes disagree with the ranks they should connect."""


class NotMackeyError(BurnsideError):
    """An operation that needs a validated Mackey functor got something else."""


class NonNaturalError(BurnsideError):
    """A family of matrices does not commute with the structure maps."""


class HomomorphismError(BurnsideError):
    """A map between groups is not a homomorphism."""


class FamilyError(BurnsideError):
    """A family is not closed under conjugation, subgroups, or hyper_p."""


class NotGeneratingError(BurnsideError):
    """A G-set does not generate at the requested prime."""


class InfeasibleError(BurnsideError):
    """A linear system has no solution in the requested coefficient ring."""

    def __init__(self, message: str, certificate: dict[str, Any] | None = None):
        super().__init__(message)
        self.certificate = certificate or {}


class NotContractedError(BurnsideError):
    """Associated graded of a filtered pre-complex is not contracted."""


class NotComplexError(BurnsideError):
    """A chain complex fails d o d = 0 where exactness is asked for."""


class NotNilpotentError(BurnsideError):
    """A perturbation that should be nilpotent is not."""


class BifreenessError(BurnsideError):
    """A biset orbit is not free on both sides."""
