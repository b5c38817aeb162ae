"""Graded commutative algebra kernel with a claim-verification harness."""

__version__ = "0.1.0"
