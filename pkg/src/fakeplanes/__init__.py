"""Exact divisor-lattice toolkit for real rational surfaces and the
complements of real boundary curves in them."""

__version__ = "0.1.0"

__all__ = ["exactalg", "lattice", "surface", "homology", "kodaira", "moves", "families", "cli"]
