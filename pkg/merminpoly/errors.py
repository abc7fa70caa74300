"""Exception hierarchy shared by the library and the CLI."""


class MerminError(Exception):
    """Base class for every error raised by merminpoly."""


class InputFormatError(MerminError):
    """Malformed input file, flag or serialized value."""


class NonsignalingViolationError(MerminError):
    """Input distribution whose marginals disagree across contexts."""


class InvalidDescriptorError(MerminError):
    """Vertex descriptor that does not match the beta class or carries a bad assignment."""


class InvalidSignedLoopError(MerminError):
    """Signed loop whose sign choice leaves the polytope."""


class UnboundedPolytopeError(MerminError):
    """H-representation with a nontrivial recession cone."""


class EmptyPolytopeError(MerminError):
    """H-representation with no feasible point."""


class CriteriaDisagreementError(MerminError):
    """Two criteria that must be equivalent returned different verdicts."""


class VerificationError(MerminError):
    """A claim checked by the verification suite did not hold."""
