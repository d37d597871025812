"""Shared exception types.

The CLI maps these onto its exit-code contract: operational problems
(bad input, guard limits) exit 1, violated hard invariants exit 2.
"""


class ParseError(ValueError):
    """Malformed textual input (set syntax, file formats)."""


class GuardExceeded(RuntimeError):
    """An enumeration guard was hit; pass force=True (CLI: --force) to override."""


class InvariantViolation(Exception):
    """An exact identity or theorem-backed inequality failed.

    This never indicates bad user input: it signals either a bug in this
    package or a falsified mathematical guarantee, and is therefore
    surfaced loudly instead of being folded into a report.
    """
