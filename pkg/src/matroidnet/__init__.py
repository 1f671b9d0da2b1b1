"""Matroids, network-error correcting codes and network construction."""
from .field import GF, Matrix, field, mat_rref, span_member, mat_inverse, rank

__version__ = "0.1.0"
