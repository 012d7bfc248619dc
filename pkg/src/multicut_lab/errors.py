"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MulticutError(Exception):
    """Base class for every error raised by multicut_lab."""


class GraphError(MulticutError, ValueError):
    """Invalid multicut instance."""


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class EndpointOutOfRange(GraphError):
    pass


class LengthMismatch(MulticutError, ValueError):
    pass


class EmptyInput(MulticutError, ValueError):
    pass


class BudgetExceeded(MulticutError, RuntimeError):
    """Raised when cycle enumeration hits its configured cap."""


class TooLarge(MulticutError, ValueError):
    def __init__(self, size: int, cap: int, what: str = "node_count"):
        super().__init__(f"{what}={size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class ShapeMismatch(MulticutError, ValueError):
    pass


class NonScalarLoss(MulticutError, ValueError):
    pass


class DegenerateBatch(MulticutError, ValueError):
    pass


class FormatError(MulticutError, ValueError):
    def __init__(self, message: str, line: int | None = None, path=None):
        # "path:line: message", "line N: message" or "path: message"
        if path is not None and line is not None:
            where = f"{path}:{line}: "
        elif path is not None:
            where = f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        else:
            where = ""
        super().__init__(where + message)
        self.line = line
        self.path = path


class BadCheckpoint(MulticutError, ValueError):
    pass


class BadConfig(MulticutError, ValueError):
    pass


class MissingLabels(MulticutError, ValueError):
    pass


class EmptyDataset(MulticutError, ValueError):
    pass
