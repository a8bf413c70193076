"""Exception hierarchy shared by every stage of the toolchain."""


class BenensonError(Exception):
    pass


class MalformedError(BenensonError, ValueError):
    """Bad input: unparseable file, dangling gate reference, cyclic program."""


class InvalidOffsetError(BenensonError, ValueError):
    pass


class DeterminismError(BenensonError):
    """A run met an offset where two different cuts could apply."""


class PreconditionError(BenensonError):
    pass


class InvariantError(PreconditionError):
    """A structural invariant (e.g. permutation layers) does not hold."""


class UnsupportedAlphabetError(PreconditionError):
    pass


class GeometryError(BenensonError):
    """A rule cannot be realised with the chosen enzyme geometry."""


class ProfileMismatchError(GeometryError):
    pass
