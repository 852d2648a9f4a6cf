"""Exception hierarchy shared by every module."""


class OdrlSemError(Exception):
    """Base class for all errors raised by this package."""


class UnknownConcept(OdrlSemError):
    def __init__(self, concept, where=""):
        self.concept = concept
        msg = f"unknown concept {concept!r}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class ClosureContradiction(OdrlSemError):
    """The closed relations violate an axiom (e.g. a pair both leq and disjoint)."""

    def __init__(self, axiom, pair):
        self.axiom = axiom
        self.pair = tuple(pair)
        super().__init__(f"{axiom}: {self.pair[0]!r}, {self.pair[1]!r}")


class DomainViolation(OdrlSemError):
    pass


class UnknownOperator(OdrlSemError):
    pass


class UngroundedConstraint(OdrlSemError):
    pass


class OperandMismatch(OdrlSemError):
    pass


class ConfigError(OdrlSemError):
    pass


class AlignmentInvalid(OdrlSemError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnrecognizedToken(OdrlSemError):
    pass


class ParseError(OdrlSemError):
    """Malformed input. ``location`` names the file and/or JSON field."""

    def __init__(self, message, location=""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(OdrlSemError):
    """Input parsed but failed a structural check; wraps the underlying error."""

    def __init__(self, cause, location=""):
        self.cause = cause
        self.location = location
        text = f"{type(cause).__name__}: {cause}"
        super().__init__(f"{location}: {text}" if location else text)
