"""Exact toric-GIT computations for quiver moduli on marked cubic surfaces."""

__version__ = "0.1.0"
