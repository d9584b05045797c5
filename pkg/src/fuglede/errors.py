"""Exception types shared across the package."""


class FugledeError(Exception):
    """Base class for all errors raised by this package."""


class NotSquareFree(FugledeError, ValueError):
    def __init__(self, n: int):
        super().__init__(f"N={n} is not square-free")
        self.n = n


class InvalidDivisor(FugledeError, ValueError):
    pass


class InvalidPrimes(FugledeError, ValueError):
    pass


class EmptyMultiSet(FugledeError, ValueError):
    pass


class SizeMismatch(FugledeError, ValueError):
    pass


class PreconditionViolated(FugledeError, ValueError):
    pass


class ParseError(FugledeError, ValueError):
    pass


class BudgetExhausted(FugledeError, RuntimeError):
    """A bounded search ran out of nodes before reaching a verdict.

    This is never a negative answer; callers must record it as inconclusive.
    """

    def __init__(self, what: str, nodes: int):
        super().__init__(f"{what}: node budget of {nodes} exhausted")
        self.what = what
        self.nodes = nodes
