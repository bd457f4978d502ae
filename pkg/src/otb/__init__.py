"""Exact toolkit for line arrangements in the projective plane: Orlik-Terao
algebras and their Betti tables, fat-point divisors on the blowup at the
singular points, resonance varieties, multinets, and scroll certificates."""

__version__ = "0.1.0"
