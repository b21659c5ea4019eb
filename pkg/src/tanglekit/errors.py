"""Exception taxonomy shared by all tanglekit modules.

Everything raised on purpose derives from TanglekitError so the CLI can
map failures to exit codes without pattern-matching on messages.
"""


class TanglekitError(Exception):
    pass


class ParseError(TanglekitError):
    """Malformed input document (edge lists, JSON payloads)."""


class ValidationError(TanglekitError):
    """Input violates a documented precondition or type invariant."""


class ContractError(ValidationError):
    """A mathematical precondition failed (caller passed an object that
    exists but does not satisfy the stated hypothesis, e.g. a separation
    claimed to be inessential that some tangle orients the other way)."""


class SizeError(TanglekitError):
    """Instance exceeds a configured search bound.  Raised instead of
    silently degrading: exhaustive guarantees do not survive sampling."""


class InvariantViolation(TanglekitError):
    """A postcondition that is supposed to be a theorem failed at runtime.

    This is a bug trap: it means either the implementation or the caller
    broke an invariant the library re-checks, never a bad input.
    """
