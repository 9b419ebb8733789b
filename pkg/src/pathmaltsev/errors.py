"""Exception hierarchy shared by every module of the package."""


class PathMaltsevError(Exception):
    """Base class for all errors raised by :mod:`pathmaltsev`."""


class InvalidAlgebra(PathMaltsevError, ValueError):
    """The algebra description violates a structural invariant."""


class MalformedTable(InvalidAlgebra):
    pass


class EmptySignature(InvalidAlgebra):
    pass


class NoPositiveArityOperation(InvalidAlgebra):
    pass


class IdempotenceError(InvalidAlgebra):
    """A nullary operation sits next to other operations.

    Constants cannot be idempotent in a nontrivial algebra, so such input is
    rejected at validation time.
    """


class ArityMismatch(PathMaltsevError, ValueError):
    pass


class ElementOutOfRange(PathMaltsevError, ValueError):
    pass


class NotIdempotent(PathMaltsevError):
    def __init__(self, violations):
        self.violations = list(violations)
        shown = ", ".join(f"{op}({e},...,{e})" for op, e in self.violations[:5])
        super().__init__(f"algebra is not idempotent: {shown}")


class CapExceeded(PathMaltsevError):
    """A closure grew past its element cap.

    This signals that the computation left desk scale, not that the input is
    wrong.
    """


class UnboundVariable(PathMaltsevError, KeyError):
    pass


class BadToken(PathMaltsevError, ValueError):
    pass


class EmptyPath(PathMaltsevError, ValueError):
    pass


class UnknownName(PathMaltsevError, ValueError):
    pass


class BadSize(PathMaltsevError, ValueError):
    pass


class NotLayered(PathMaltsevError, ValueError):
    pass


class NoWalk(PathMaltsevError):
    pass
