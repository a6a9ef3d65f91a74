"""Exception types shared across the package."""


class EchofitError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(EchofitError, ValueError):
    """Invalid configuration or input specification."""


class ContractError(EchofitError, ValueError):
    """Input violates an operation's documented preconditions."""


class DegenerateSignalError(EchofitError, ValueError):
    """Signal has no usable structure (e.g. zero variance)."""


class DelayUndefinedError(EchofitError, ValueError):
    """Cross-correlation carries no usable delay information."""


class NotTrainedError(EchofitError, RuntimeError):
    """Model used before the required training stage completed."""


class InsufficientDataError(EchofitError, ValueError):
    """Operation refused because too little data was supplied."""
