"""Exact symbolic engine for Dunkl operators and spin Calogero models.

The package checks, with exact cyclotomic arithmetic, that Dunkl operators of
a Coxeter group commute, that monodromy matrices built from them satisfy the
half-loop and twisted half-loop relations, and that the resulting conserved
hierarchies reproduce explicit spin Calogero Hamiltonians.
"""

__version__ = "0.1.0"
