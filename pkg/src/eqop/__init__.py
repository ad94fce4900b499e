"""Exact decision procedures for equivariant colored operads in finite sets."""

__version__ = "0.1.0"
