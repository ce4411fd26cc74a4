"""Exact computations with half-integral weight forms and metaplectic Hecke algebras."""

__version__ = "0.1.0"
