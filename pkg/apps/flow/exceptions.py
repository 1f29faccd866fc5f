from apps.core.exceptions import BraidflowError


class FlowError(BraidflowError):
    """Integration failed: step-size underflow or a state escaping D."""


class AmbiguousAssignmentError(BraidflowError):
    """A flowed sample lies within tolerance of two link components."""
