"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to:
2 for usage/parse problems, 3 for failed mathematical preconditions,
4 for resource caps.
"""


class TqftError(Exception):
    exit_code = 3


class UsageError(TqftError):
    exit_code = 2


class ResourceCap(TqftError):
    exit_code = 4


class TooLarge(ResourceCap):
    pass


class MemoryCap(ResourceCap):
    pass


class SizeCap(ResourceCap):
    pass


class NotAGroup(TqftError):
    pass


class GroupMismatch(TqftError):
    pass


class NotAnAction(TqftError):
    pass


class NotAFunctor(TqftError):
    pass


class NotIsoInvariant(TqftError):
    pass


class BordismSyntaxError(UsageError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BordismTypeError(UsageError):
    def __init__(self, message, expected, found, position=None):
        super().__init__(f"{message}: expected {expected} circles, found {found}")
        self.expected = expected
        self.found = found
        self.position = position


class NotClassInvariant(TqftError):
    pass


class MapNotInGroup(TqftError):
    pass


class NotInvariant(TqftError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DependentGenerators(TqftError):
    pass


class InsufficientPrimes(TqftError):
    pass


class ValidationFailed(TqftError):
    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class NonIntegerMultiplicity(TqftError):
    pass


class NotDiagonalizable(TqftError):
    pass


class NotEigenvector(TqftError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
