"""Colored operads of wiring diagrams.

The package implements the directed operads (general, normal, strict), the
undirected operad, their generator/relation calculus with stratified normal
forms, four concrete operad algebras, and the operad maps between the
directed and undirected worlds.
"""

from wiring_operads.finset import FinMap, FinSet, Permutation, coproduct, pushout
from wiring_operads.wd import Box, WiringDiagram, comp_i, gamma, make_wd, permute, unit

__all__ = [
    "FinMap",
    "FinSet",
    "Permutation",
    "coproduct",
    "pushout",
    "Box",
    "WiringDiagram",
    "make_wd",
    "unit",
    "comp_i",
    "gamma",
    "permute",
]
