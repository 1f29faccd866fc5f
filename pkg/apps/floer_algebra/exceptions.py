from apps.core.exceptions import BraidflowError


class WindowError(BraidflowError):
    """Window endpoints out of order or equal to a generator action."""


class MorphismError(BraidflowError):
    """A morphism breaks its energy-shift contract or does not descend to homology."""


class ShapeError(BraidflowError):
    """Complexes or morphisms that do not fit together."""
