"""Exception hierarchy for the package."""


class QSAError(ValueError):
    """Base class for every error raised by ``qutrit_qsa``."""


class InvalidDimensionError(QSAError):
    pass


class InvalidStateError(QSAError):
    pass


class InvalidParamsError(QSAError):
    pass


class InvalidPlaneError(QSAError):
    pass


class DegenerateMarginalError(QSAError):
    pass


class EmptyBodyError(QSAError):
    """No quasi-random point fell inside the Bloch body."""


class DegenerateEvidenceError(QSAError):
    """The evidence integral is not strictly positive."""


class ConsistencyError(QSAError):
    """A numerical invariant that should hold by construction was violated."""


class SymmetryNotApplicableError(QSAError):
    pass


class InvalidPovmError(QSAError):
    pass


class InvalidKernelError(QSAError):
    pass


class InvalidSimplexError(QSAError):
    pass
