"""Exception types shared across the package.

Exit-code mapping used by the CLI: validation/domain problems exit 2,
guard refusals exit 3, I/O failures exit 4.
"""


class DomainError(ValueError):
    """An argument is outside the documented domain of an operation."""


class ConfigError(DomainError):
    """An experiment configuration is malformed or inconsistent."""


class FormatError(ValueError):
    """A persisted file has a bad magic line, version, or is truncated."""


class GuardExceededError(RuntimeError):
    """A brute-force / exact path refused to run above its size guard."""
