"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class BarfillError(Exception):
    """Base class for all errors raised by barfill."""


class SpecError(BarfillError, ValueError):
    """A group specification string does not parse."""


class CapExceeded(BarfillError):
    """A configured desk-scale cap would be exceeded; the operation refuses."""


class BudgetExhausted(BarfillError):
    """A search ran out of its node budget before it could answer."""


class PreconditionError(BarfillError, ValueError):
    """Inputs violate an operation's precondition (not a boundary, not a cycle, ...)."""
