"""Entanglement in finitely correlated states, Werner-Holevo channel norms and gapped spin chains."""

from . import channels, entanglement, errors, fcs, qlinalg

__version__ = "0.1.0"

__all__ = ["channels", "entanglement", "errors", "fcs", "qlinalg", "__version__"]
