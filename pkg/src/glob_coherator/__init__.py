"""Bounded computations with the inductive coherator for Grothendieck infinity-groupoids."""

__version__ = "0.1.0"
