class InvariantViolation(RuntimeError):
    """An internal consistency check failed; callers map this to exit code 3.

    Seeing this means a bug in the package, not bad user input: e.g. an open
    completed tableau branch admitting no model, or a normalization step that
    fails to shrink the termination measure.
    """
