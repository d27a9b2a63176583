"""
Exception hierarchy shared by every afinv module.

Each class carries a machine-readable ``name`` that the command line
prints next to the message and scripts can match on.
"""


class AfinvError(Exception):
    """Base class for all afinv failures"""

    name = "AfinvError"


class DimensionError(AfinvError):
    name = "DimensionError"


class UsageError(AfinvError):
    name = "UsageError"


class RangeError(AfinvError):
    name = "RangeError"


class ParseError(AfinvError):
    name = "ParseError"


class ConsistencyError(AfinvError):
    """A post-hoc verification of an exact result failed"""

    name = "ConsistencyError"


class DomainError(AfinvError):
    """A mathematical precondition of the operation is violated"""

    name = "DomainError"


class ArithmeticDomainError(DomainError):
    name = "ArithmeticDomainError"


class NotPrimitiveError(DomainError):
    name = "NotPrimitive"


class NotHyperbolicError(DomainError):
    name = "NotHyperbolic"


class NotSquarefreeError(DomainError):
    name = "NotSquarefree"


class FactorizationNotFoundError(DomainError):
    name = "FactorizationNotFound"
