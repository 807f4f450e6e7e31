"""Exception hierarchy shared by every layer of the engine.

Each class carries a stable ``code`` string.  The command line prints that
code as the first token on stderr so scripts can grep for it, and maps the
class to an exit status (syntax problems exit 2, everything else exits 1).
"""


class EngineError(Exception):
    """Base class for all errors raised by this package."""

    code = "EngineError"
    exit_status = 1


class ParseError(EngineError):
    """Malformed DSL text.  Carries the offset of the failing token."""

    code = "SyntaxError"
    exit_status = 2

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(EngineError):
    """Well-formed input outside the domain an operation supports."""

    code = "DomainError"


class UnsupportedDiagSum(DomainError):
    """Two diagonal parts with no common representable closed form.

    The operator algebra stores diagonals as formal rational combinations,
    which makes every sum representable, so current code paths never raise
    this.  The class is kept because callers are allowed to catch it.
    """

    code = "UnsupportedDiagSum"


class NonCommutingFields(EngineError):
    """Bracket construction from a pair of fields that fail commute_check."""

    code = "NonCommutingFields"


class QueerAtPoint(EngineError):
    """No bivector exists: a field is queer at the point and independent."""

    code = "QueerAtPoint"


class WitnessNotFound(EngineError):
    """Witness search exhausted its family without a nonzero certificate."""

    code = "WitnessNotFound"


class AxiomViolation(EngineError):
    """A bracket axiom failed.  Carries the offending triple and point."""

    code = "AxiomViolation"

    def __init__(self, message: str, axiom: str, triple=None, point=None):
        super().__init__(message)
        self.axiom = axiom
        self.triple = triple
        self.point = point


class ToleranceExceeded(EngineError):
    """Finite-difference cross-check disagreed with the symbolic jets."""

    code = "ToleranceExceeded"
