"""Permutation-interleaved Zadoff-Chu sequences with exact CAZAC verification."""

__version__ = "0.1.0"
