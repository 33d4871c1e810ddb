"""Prime tower factorization trees: codes, pattern search and counting functions."""

__version__ = "0.1.0"
