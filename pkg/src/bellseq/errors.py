class InvariantViolation(RuntimeError):
    """An internal consistency check failed (a bug, not bad input)."""
