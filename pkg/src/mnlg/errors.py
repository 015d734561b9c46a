"""Exception hierarchy shared by every stage of the generator."""


class MnlgError(Exception):
    """Base class for all errors raised by this package."""


class FSSyntaxError(MnlgError):
    def __init__(self, message, line=None, col=None, source=None):
        self.line = line
        self.col = col
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:{col}:"
        super().__init__(f"{where} {message}" if where else message)


class HierarchyError(MnlgError):
    """The type hierarchy is cyclic, disconnected or has ambiguous GLBs."""


class GrammarError(MnlgError):
    """A grammar file could not be loaded."""


class PlanError(MnlgError):
    """A dialogue plan violates the input schema."""


class ReferringError(MnlgError):
    """A referring expression could not be produced."""


class RealizationError(MnlgError):
    """Lexical realization failed (missing entry, bad leaf)."""


class AgreementError(RealizationError):
    """Agreement bundles linked by the grammar do not unify."""


class GenerationFailure(MnlgError):
    """No derivation exists for a dialogue act."""
