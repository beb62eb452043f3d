"""Structured errors shared across the package.

Every exception carries a stable ``code`` string so the CLI can report
machine-readable failures without parsing messages.
"""


class DensilabError(Exception):
    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class NotSymmetric(DensilabError):
    code = "NotSymmetric"


class NotExpansive(DensilabError):
    code = "NotExpansive"


class NotPositive(DensilabError):
    code = "NotPositive"


class SingularMatrix(DensilabError):
    code = "SingularMatrix"


class BadParameter(DensilabError):
    code = "BadParameter"


class NotInvariant(DensilabError):
    code = "NotInvariant"


class DegenerateWindow(DensilabError):
    code = "DegenerateWindow"


class ParseError(DensilabError):
    code = "ParseError"


class NotExpanding(DensilabError):
    code = "NotExpanding"


class WrongDeterminant(DensilabError):
    code = "WrongDeterminant"


class WrongSign(DensilabError):
    code = "WrongSign"


class BadRow(DensilabError):
    code = "BadRow"


class NotUnimodular(DensilabError):
    code = "NotUnimodular"


class PreconditionViolated(DensilabError):
    code = "PreconditionViolated"
