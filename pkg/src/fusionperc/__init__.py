"""Percolation Monte Carlo for fusion lattices built from star-shaped resource states.

The package covers the full pipeline: lattice construction from connection
vectors, sampling of fusion/loss (and classical bond/site) percolation models,
union-find cluster analysis, threshold estimation with finite-size
extrapolation, greedy lattice optimization, and a small stabilizer engine that
verifies the fusion algebra behind the percolation model.
"""

__version__ = "0.1.0"

from .lattice import (
    ConnectionVectorSet,
    LatticeInstance,
    build_lattice,
    load_lattice_spec,
    vectors_for_family,
)
from .sampling import FusionModelParams, SampleOutcome

__all__ = [
    "ConnectionVectorSet",
    "LatticeInstance",
    "build_lattice",
    "load_lattice_spec",
    "vectors_for_family",
    "FusionModelParams",
    "SampleOutcome",
    "__version__",
]
