"""Exception hierarchy. Every error carries a stable ``code`` and an exit status
used by the command line front end (1 = engine failure, 2 = usage/input)."""


class CompomatError(Exception):
    code = "E_ENGINE"
    exit_status = 1


class InputError(CompomatError):
    code = "E_INPUT"
    exit_status = 2


# groupoid layer
class NotComposable(CompomatError):
    code = "E_NOT_COMPOSABLE"


class NotInGroupoid(CompomatError):
    code = "E_NOT_IN_GROUPOID"


class UnknownObject(InputError):
    code = "E_UNKNOWN_OBJECT"


class ObjectMismatch(InputError):
    code = "E_OBJECT_MISMATCH"


class ModeMismatch(InputError):
    code = "E_MODE_MISMATCH"


class ClosureExceedsCap(CompomatError):
    code = "E_CLOSURE_CAP"

    def __init__(self, cap: int):
        super().__init__(f"generated groupoid exceeds {cap} arrows")
        self.cap = cap


# matrices
class Singular(CompomatError):
    code = "E_SINGULAR"


# material layer
class EmptySampleSet(CompomatError):
    code = "E_EMPTY_SAMPLES"


class ResponseUndefined(CompomatError):
    code = "E_RESPONSE_UNDEFINED"


class NotClosed(CompomatError):
    code = "E_NOT_CLOSED"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotTransitive(InputError):
    code = "E_NOT_TRANSITIVE"


# squares
class CornerMismatch(CompomatError):
    code = "E_CORNER_MISMATCH"


class WrongGroupoid(CompomatError):
    code = "E_WRONG_GROUPOID"


class NotComposableVertically(CompomatError):
    code = "E_NOT_COMPOSABLE_V"


class NotComposableHorizontally(CompomatError):
    code = "E_NOT_COMPOSABLE_H"


class NotComposableBlock(CompomatError):
    code = "E_NOT_COMPOSABLE_BLOCK"


class SizeCap(CompomatError):
    code = "E_SIZE_CAP"


class InvalidPartial(InputError):
    code = "E_INVALID_PARTIAL"


# fixtures
class InvalidParams(InputError):
    code = "E_INVALID_PARAMS"


class NotAGroup(InputError):
    code = "E_NOT_A_GROUP"


# documents
class ParseError(InputError):
    code = "E_PARSE"


class SchemaError(InputError):
    code = "E_SCHEMA"


class ResolutionError(InputError):
    code = "E_RESOLUTION"
