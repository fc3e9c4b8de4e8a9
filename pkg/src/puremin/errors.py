"""Exception types shared across the package."""


class Unsupported(ValueError):
    """A well-formed request that lies outside what the library can decide or construct."""
