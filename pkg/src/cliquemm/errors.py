"""Exception types shared across the package."""


class InputError(ValueError):
    """Rejected input: bad shapes, out-of-range indices, malformed files."""


class LimitExceeded(RuntimeError):
    """A memory or work guard refused to run the requested computation."""


class VerificationError(AssertionError):
    """A self-check (clique re-verification, cross-algorithm agreement) failed."""
