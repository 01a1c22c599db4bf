"""Exact cyclic and Hochschild-type cohomology of commutative DG algebras."""

__version__ = "0.1.0"
