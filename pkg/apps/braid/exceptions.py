from apps.core.exceptions import BraidflowError


class StrandCountError(BraidflowError):
    """Braids on different numbers of strands, or a generator index out of range."""


class DegenerateProjectionError(BraidflowError):
    """Tangential or simultaneous crossings in the chosen projection; retry another angle."""


class ExtractionError(BraidflowError):
    """Trajectories do not form a closable braid (wrong basepoints, endpoints or separation)."""
