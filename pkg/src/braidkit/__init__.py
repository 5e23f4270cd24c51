"""Exact-arithmetic workbench for braided tensor algebras.

Computes, at bounded degree over Q and GF(p): quantum-shuffle
comultiplications, Nichols algebra towers and combinatorial rank,
universal enveloping algebras of braided Lie algebras with headroom
certification, PBW bases, coradical filtrations, and the equivalence
of PBW type, strict generation, cosymmetry and lifting.
"""

from .fields import GF, Field, FieldError, RATIONALS
from .linalg import Echelon, LinalgError, Matrix, Subspace
from .braided import (
    BraidedSpace,
    BraidingError,
    TupleBasis,
    braid_lift,
    ct_component,
    delta_component,
    quantum_symmetrizer,
)
from .tower import (
    TowerError,
    combinatorial_rank,
    free_presentation,
    nichols_dims_symmetrizer,
    nichols_dims_tower,
    nichols_presentation,
    primitives_of_degree,
    tower_step,
)
from .enveloping import (
    BracketSpec,
    Envelope,
    EnvelopingError,
    HeadroomInstability,
    coradical_filtration,
    cosymmetric_check,
    envelope_of_primitives,
    lifting_check,
    pbw_basis,
    pbw_check,
    relations_from_bracket,
    strictly_generated_check,
    teopbw_crosscheck,
    theta_factors_check,
    tower_envelope,
)
from .corpus import CORPUS

__all__ = [
    "GF", "Field", "FieldError", "RATIONALS",
    "Echelon", "LinalgError", "Matrix", "Subspace",
    "BraidedSpace", "BraidingError", "TupleBasis", "braid_lift",
    "ct_component", "delta_component", "quantum_symmetrizer",
    "TowerError", "combinatorial_rank", "free_presentation",
    "nichols_dims_symmetrizer", "nichols_dims_tower",
    "nichols_presentation", "primitives_of_degree", "tower_step",
    "BracketSpec", "Envelope", "EnvelopingError", "HeadroomInstability",
    "coradical_filtration", "cosymmetric_check", "envelope_of_primitives",
    "lifting_check", "pbw_basis", "pbw_check", "relations_from_bracket",
    "strictly_generated_check", "teopbw_crosscheck", "theta_factors_check",
    "tower_envelope",
    "CORPUS",
]
