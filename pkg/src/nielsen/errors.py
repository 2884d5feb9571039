"""Exception hierarchy shared by every module of the package."""


class NielsenError(Exception):
    """Base class for all errors raised by this package."""


class ArgumentError(NielsenError, ValueError):
    """An argument is out of range or malformed."""


class CapacityError(NielsenError):
    """A computation would exceed a configured size threshold."""


class DomainError(NielsenError):
    """The operation is undefined for this kind of group (e.g. not solvable)."""


class NoActionError(NielsenError):
    """No free action exists at the requested genus."""


class UnsupportedError(NielsenError):
    """The operation is deliberately not supported for these parameters."""


class ParseError(NielsenError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CacheError(NielsenError):
    """Base class for orbit-cache file problems."""


class BadMagicError(CacheError):
    pass


class BadVersionError(CacheError):
    pass


class CrcMismatchError(CacheError):
    pass


class FingerprintMismatchError(CacheError):
    pass


class ModeMismatchError(CacheError):
    pass
