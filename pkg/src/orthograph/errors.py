"""Exception types shared across the package."""


class OrthographError(Exception):
    """Base class for all orthograph errors."""


class UsageError(OrthographError):
    """Operands that cannot be combined (e.g. mixed moduli)."""


class DomainError(OrthographError):
    """Input outside an operation's mathematical domain."""


class ConfigError(OrthographError):
    """Invalid form specification."""


class ResourceLimitError(OrthographError):
    """A configured cap or budget would be exceeded."""


class FormulaIntegrityError(OrthographError):
    """A closed-form expression evaluated to a non-integer or negative power."""
