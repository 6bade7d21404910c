"""Combinatorial invariants of varieties of CM-type, specialised to Fermat surfaces."""

__version__ = "0.1.0"
