"""Error types shared by every module.

Each class carries a stable ``code`` string that the CLI prints; anything
deriving from :class:`ValidationError` maps to exit status 2.
"""


class SlitNormError(Exception):
    code = "Error"


class ValidationError(SlitNormError, ValueError):
    code = "ValidationError"


class ZeroClass(ValidationError):
    code = "ZeroClass"


class NonPrimitive(ValidationError):
    code = "NonPrimitive"


class NotNeighbors(ValidationError):
    code = "NotNeighbors"


class IntegerHasNoParents(ValidationError):
    code = "IntegerHasNoParents"


class NotCoprime(ValidationError):
    code = "NotCoprime"


class NotUnimodular(ValidationError):
    code = "NotUnimodular"


class SlopeNotRational(ValidationError):
    code = "SlopeNotRational"


class CylinderTooShort(ValidationError):
    code = "CylinderTooShort"


class NotAdjacent(ValidationError):
    code = "NotAdjacent"


class IllConditioned(ValidationError):
    code = "IllConditioned"


class VisibilityIndeterminate(SlitNormError):
    code = "VisibilityIndeterminate"


class TargetUnreachable(SlitNormError):
    code = "TargetUnreachable"


class WindowTooSmall(SlitNormError):
    code = "WindowTooSmall"
