"""Certificate-producing graph algorithms for Ramsey goodness of cycles."""

__version__ = "0.1.0"
