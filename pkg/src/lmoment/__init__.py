"""Desk-scale numerical verification toolkit for the twisted first moment
of Dirichlet L-functions against a fixed even Maass cusp form."""

__version__ = "0.1.0"
