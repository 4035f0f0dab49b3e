"""Semi-snc detection and resolution for pairs in coordinate normal form."""

__version__ = "0.1.0"
