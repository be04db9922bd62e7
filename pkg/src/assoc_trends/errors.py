"""Exception types shared across the pipeline.

Each maps to a CLI exit code: ConfigError -> 1, InputError -> 2,
InvariantError -> 3.
"""


class ConfigError(ValueError):
    """Invalid configuration or command-line arguments."""


class InputError(OSError):
    """Unreadable or unwritable input/output paths."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug."""
