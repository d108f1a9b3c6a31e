"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its uniform exit-code scheme without a lookup table.
"""


class SymrankError(Exception):
    exit_code = 1


class InputError(SymrankError, ValueError):
    exit_code = 2


class ShapeMismatch(InputError):
    pass


class NotSymmetric(InputError):
    pass


class WrongShape(InputError):
    pass


class ZeroFactor(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class SingularSubstitution(InputError):
    pass


class BadEpsilon(InputError):
    pass


class MixedFields(InputError, TypeError):
    pass


class DivisionByZero(SymrankError, ZeroDivisionError):
    exit_code = 2


class BudgetExceeded(SymrankError):
    exit_code = 3


class UnsupportedField(SymrankError):
    exit_code = 4


class InfiniteField(UnsupportedField):
    pass


class BadCharacteristic(UnsupportedField):
    pass


class SingularPencil(SymrankError):
    exit_code = 2


class DidNotConverge(SymrankError):
    exit_code = 5
