"""Exact graded commutative algebra, Young symmetrizers and homology theories."""

__version__ = "0.1.0"
