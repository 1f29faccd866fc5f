from apps.core.exceptions import BraidflowError


class PreservationError(BraidflowError):
    """A base or perturbed time-1 map does not carry the link onto itself."""


class SeparationError(BraidflowError):
    """Two strands come closer than the separation margin."""


class RealizationError(BraidflowError):
    """A realizing Hamiltonian does not produce the requested braid."""
