"""Exact Markoff and Lagrange spectra of the Hecke group H4 through Romik digit expansions."""

__version__ = "0.1.0"
