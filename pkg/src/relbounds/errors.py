"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class BudgetError(RuntimeError):
    """A brute-force enumeration would exceed its configured budget."""


class DenominatorZeroError(ZeroDivisionError):
    """A deviation ratio has a zero denominator (use tau > 0)."""


class DivergenceError(ArithmeticError):
    """A moment integral does not converge."""


class ConfigError(ValueError):
    """An experiment configuration failed validation."""


class PreconditionWarning(UserWarning):
    """A formula was evaluated outside the regime where its theorem applies."""
