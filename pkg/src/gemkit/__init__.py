"""gemkit: crystallization theory toolkit.

Gems (edge-colored graphs encoding PL manifolds), regular genus per cyclic
permutation, Gurau degree, dipole moves, fundamental group data, small-order
census, and the genus/G-degree classification rules in dimension 4.
"""

__version__ = "0.1.0"

from .algebra import AbelianInvariants, GroupPresentation, PresentationError, first_homology, pi1_presentation, rank_lower_bound
from .graph import ColoredGraph, GemError, canonical_form, is_isomorphic, parse_gem, read_gem, serialize_gem, sphere_gem, write_gem
from .invariants import (
    HalfInt,
    InvariantReport,
    associated_permutation,
    cyclic_permutations,
    euler_characteristic,
    genus_vector,
    genus_wrt,
    gurau_degree,
    invariant_report,
    regular_genus,
)
from .moves import Dipole, eliminate_dipole, add_dipole, manifold_check, recognize_sphere, reduce_to_crystallization

__all__ = [
    "AbelianInvariants",
    "ColoredGraph",
    "Dipole",
    "GemError",
    "GroupPresentation",
    "HalfInt",
    "InvariantReport",
    "PresentationError",
    "add_dipole",
    "associated_permutation",
    "canonical_form",
    "cyclic_permutations",
    "eliminate_dipole",
    "euler_characteristic",
    "first_homology",
    "genus_vector",
    "genus_wrt",
    "gurau_degree",
    "invariant_report",
    "is_isomorphic",
    "manifold_check",
    "parse_gem",
    "pi1_presentation",
    "rank_lower_bound",
    "read_gem",
    "recognize_sphere",
    "reduce_to_crystallization",
    "regular_genus",
    "serialize_gem",
    "sphere_gem",
    "write_gem",
]
