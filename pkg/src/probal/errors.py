"""Exception types shared across the package."""


class ProbalError(Exception):
    """Base class for every error raised by this package."""


class GraphError(ProbalError):
    """Invalid graph input."""


class DuplicateEdgeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class NotATreeError(GraphError):
    pass


class UnknownVertexError(GraphError):
    pass


class ContractionNotTreeError(ProbalError):
    """Contracting the dense clusters did not produce a tree.

    Signals that the input violated the moral/chordal assumptions the
    pipeline relies on; it is reported, never silently repaired.
    """


class PriorError(ProbalError):
    """Invalid root-location prior."""


class SingleVertexError(PriorError):
    pass


class MissingVertexError(PriorError):
    pass


class NonPositiveMassError(PriorError):
    pass


class NotNormalizedError(PriorError):
    pass


class AllZeroSegmentError(ProbalError):
    """Every vertex of a segment carries zero mass; the caller's state is broken."""


class EmptyInterventionError(ProbalError):
    pass


class RoundCapExceededError(ProbalError):
    """The design loop ran past its hard round cap; never expected on valid input."""


class SearchSpaceTooLargeError(ProbalError):
    pass


class DegenerateBoundError(ProbalError):
    pass


class BudgetFractionTooLargeError(ProbalError):
    pass


class GenerationStalledError(ProbalError):
    pass


class FileFormatError(ProbalError):
    pass
