"""Exception types shared across the engine."""


class GradusError(Exception):
    """Base class for engine errors."""


class HomogeneityError(GradusError):
    """A presentation entry or sequence element fails its degree constraint."""


class WindowOverflowError(GradusError):
    """A computation needs graded pieces outside the realized window."""


class DomainError(GradusError):
    """Operation applied to an input outside its domain (e.g. zero module)."""


class SearchFailureError(GradusError):
    """A randomized search exhausted its trials."""


class DiagnosticMismatchError(GradusError):
    """Primary algorithm and its independent cross-check disagree."""


class ParseError(GradusError):
    """Module-file or polynomial syntax error, with location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col
