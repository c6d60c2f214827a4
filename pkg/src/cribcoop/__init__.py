"""Rate regions of cooperating, partially cribbing multiple-access channels."""

__version__ = "0.1.0"
