"""Error types shared across the package.

Invalid arguments to individual operations raise plain ValueError; the
classes here cover whole-run failure modes that map to CLI exit codes.
"""


class ConfigError(ValueError):
    """Invalid simulation configuration (CLI exit code 2)."""


class NumericalFailureError(RuntimeError):
    """Numerical breakdown, e.g. capacity sums overflowing to infinity
    at small tau (CLI exit code 3)."""
