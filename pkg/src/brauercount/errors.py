"""Exception types raised across the package."""


class InputError(ValueError):
    """Invalid argument: zero where nonzero is required, bad spec, infeasible bound."""


class UndefinedAtPoint(InputError):
    """A symbol or fibre is evaluated where a defining value vanishes."""


class PreconditionError(InputError):
    """A family violates a hypothesis of the asymptotic formula it is built for."""
