from apps.core.exceptions import BraidflowError


class LayoutError(BraidflowError):
    """A link layout violates its geometric or area invariants."""


class AdmissibilityError(BraidflowError):
    """An operation needs an admissible link and did not get one."""
