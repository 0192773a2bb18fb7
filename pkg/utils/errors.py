# File: utils/errors.py
# Exception hierarchy shared by every package

from typing import List, Optional


class PathwayError(Exception):
    """Base class for model, solver and harness errors (CLI exit code 2)"""


# ==================== SHEET ERRORS ====================

class FormulaSyntaxError(PathwayError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownFunction(PathwayError):
    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(f"Unknown function '{name}'")


class CycleError(PathwayError):
    def __init__(self, cycle: List[str]):
        self.cycle = list(cycle)
        super().__init__(f"Dependency cycle: {' -> '.join(self.cycle)}")


class UndefinedReference(PathwayError):
    def __init__(self, cell: str, referenced_by: Optional[str] = None):
        self.cell = cell
        self.referenced_by = referenced_by
        where = f" (referenced by {referenced_by})" if referenced_by else ""
        super().__init__(f"Undefined cell '{cell}'{where}")


class NotAnInputCell(PathwayError):
    def __init__(self, cell: str):
        self.cell = cell
        super().__init__(f"Cell '{cell}' holds a formula and cannot be set")


class EvalError(PathwayError):
    DIVISION_BY_ZERO = "DivisionByZero"
    DOMAIN_ERROR = "DomainError"

    def __init__(self, kind: str, cell: Optional[str] = None, detail: str = ""):
        self.kind = kind
        self.cell = cell
        self.detail = detail
        super().__init__(f"{kind} at {cell}: {detail}" if detail else f"{kind} at {cell}")


# ==================== ENVIRONMENT ERRORS ====================

class InvalidParams(PathwayError):
    pass


class InvalidConfig(PathwayError):
    pass


class InvalidPlan(PathwayError):
    pass


class EpisodeExhausted(PathwayError):
    pass


class EpisodeDone(PathwayError):
    pass


class NonFiniteAction(PathwayError):
    pass


# ==================== SOLVER ERRORS ====================

class InvalidInterval(PathwayError):
    pass


class NondeterministicObjective(PathwayError):
    pass


class DivergenceDetected(PathwayError):
    pass


class SearchSpaceTooLarge(PathwayError):
    pass
