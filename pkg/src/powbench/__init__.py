"""Memory-hard proof-of-work timing audit toolkit."""

__version__ = "0.1.0"
