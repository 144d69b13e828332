from typing import Optional


class BcidxError(Exception):
    """Root of every error raised by bcidx."""


class TermSyntaxError(BcidxError, ValueError):
    """Raised when an input file does not follow the s-expression grammar."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class UnknownSymbolError(TermSyntaxError):
    pass


class ArityError(TermSyntaxError):
    pass


class SortError(TermSyntaxError):
    pass


class InvalidPositionError(BcidxError, ValueError):
    pass


class RenamingError(BcidxError, ValueError):
    pass


class NotNormalFormError(BcidxError, ValueError):
    pass


class RewriteBudgetExceeded(BcidxError, RuntimeError):
    """The rewrite system terminates on ground terms, so hitting this is a bug."""


class LengthDeclError(BcidxError, ValueError):
    pass


class MalformedStructureError(BcidxError, ValueError):
    pass


class CompletionError(BcidxError, ValueError):
    pass


class InvalidProofError(BcidxError, ValueError):
    pass


class SearchTimeout(BcidxError, RuntimeError):
    pass
