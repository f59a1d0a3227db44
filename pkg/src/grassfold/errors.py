"""Exception hierarchy shared by all modules."""


class GrassfoldError(Exception):
    """Base class for library errors."""


class DegenerateInputError(GrassfoldError):
    """Input violates a genericity assumption (coincident points, non-spanning set, ...)."""


class PreconditionError(GrassfoldError):
    """A documented precondition of an operation does not hold."""


class MalformedScriptError(GrassfoldError):
    """A derivation script refers to marks or steps that do not exist."""


class ScriptDegeneracy(DegenerateInputError):
    """A derivation script cannot be replayed on a particular configuration.

    ``step`` is the index of the failing step (``None`` for the base stage) and
    ``reason`` a short machine-readable tag.
    """

    def __init__(self, step, reason, detail=""):
        self.step = step
        self.reason = reason
        self.detail = detail
        msg = f"script degenerate at step {step}: {reason}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)

    def report(self):
        return {"step": self.step, "reason": self.reason, "detail": self.detail}


class FatDiagonalError(DegenerateInputError):
    """Two Vandermonde parameters coincide."""


class IndeterminateError(GrassfoldError):
    """A closure-membership question could not be decided."""


class SchemaError(GrassfoldError):
    """A JSON document does not match its schema; ``location`` is a JSON pointer."""

    def __init__(self, location, message):
        self.location = location
        self.message = message
        super().__init__(f"{location or '/'}: {message}")
