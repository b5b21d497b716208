"""Exact computer algebra for de Rham cohomology, Gauss-Manin connections,
spectral sequences of filtered complexes, the Quillen five-term sequence, and
the characteristic-zero t-de Rham complex.

Everything is computed over Q (over Z for the Bockstein path) with exact
rational arithmetic; no floating point is used anywhere.
"""

__version__ = "0.1.0"
