"""Exception hierarchy shared by every layer of the engine."""


class RefineAlgError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(RefineAlgError):
    """Malformed or inconsistent signature file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownSymbolError(RefineAlgError):
    """A name was looked up that the signature does not declare."""


class TermError(RefineAlgError):
    """Ill-formed term or out-of-range variable/projection index."""


class FormulaError(RefineAlgError):
    """Ill-formed filter formula or truth table, or a disjointness violation."""


class DiagramError(RefineAlgError):
    """A diagram failed to typecheck or a composition boundary mismatched."""


class EnumerationCapError(RefineAlgError):
    """An exhaustive enumeration would exceed the configured atom cap."""


class WireFormatError(RefineAlgError):
    """A workflow JSON document does not match the documented schema."""


class ValuationError(RefineAlgError):
    """A valuation file is malformed or does not cover the signature."""


class ExecutionError(RefineAlgError):
    """A concrete run hit a cell outside its declared domain."""


class CsvError(RefineAlgError):
    """A CSV file does not match the expected schema."""


class InternalInconsistencyError(RefineAlgError):
    """The decision procedure and the independent oracle disagreed."""
