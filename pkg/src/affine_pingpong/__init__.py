"""Certified locally commutative free pairs in SA(2, Z) and their consequences."""

__version__ = "0.1.0"
