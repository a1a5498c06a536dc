"""Exact-arithmetic toolkit for desk-scale incidence geometry.

Subpackages cover finite Coxeter systems, truncated local fields, the
projective line with its recovered arithmetic, chamber systems of small
flag geometries with their building axioms and cell decompositions, root
groups of Moufang polygons, and the tree of lattice classes over a local
field, plus a CLI that wires the checks together.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
