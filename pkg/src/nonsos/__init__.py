"""Exact certificates that nonnegative ternary sextics and quaternary quartics are not sums of squares."""

__version__ = "0.1.0"
