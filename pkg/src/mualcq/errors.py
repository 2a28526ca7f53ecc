"""Exception hierarchy shared by every module of the package."""


class MuALCQError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MuALCQError):
    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class WellFormednessError(MuALCQError):
    """A fixpoint binder whose variable occurs non-positively in its body."""

    def __init__(self, binder, variable, path):
        self.binder = binder
        self.variable = variable
        self.path = tuple(path)
        where = " > ".join(self.path) or "<root>"
        super().__init__(
            f"variable {variable} bound by {binder} occurs negatively (path: {where})"
        )


class ClosednessError(MuALCQError):
    """A concept that must be closed has free variables."""

    def __init__(self, free, context=""):
        self.free = frozenset(free)
        names = ", ".join(sorted(self.free))
        super().__init__(f"free variables {names} in {context or 'concept'}")


class NotClosed(ClosednessError):
    pass


class UnsupportedRole(MuALCQError):
    pass


class InverseRoleUnsupported(UnsupportedRole):
    pass


class NotAFixpoint(MuALCQError):
    pass


class UnboundVariable(MuALCQError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"no valuation for free variable {name}")


class NonMonotoneOperator(MuALCQError):
    pass


class DomainTooLarge(MuALCQError):
    pass


class UnknownIndividual(MuALCQError):
    pass


class CapExceeded(MuALCQError):
    pass


class NumberRestrictionPresent(MuALCQError):
    pass


class NotATree(MuALCQError):
    def __init__(self, message, witness):
        self.witness = witness
        super().__init__(message)


class InternalError(MuALCQError):
    """An invariant of the reasoner itself was violated (a bug, not bad input)."""
