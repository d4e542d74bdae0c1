"""Gluing codes, lattices and a finite weight model along totally singular subspaces of F2 quadratic spaces."""

from .codeforge import BinaryCode, build_golay, glue_space_C, verify_759_identity
from .f2linalg import F2Matrix, F2Vector, Subspace
from .latticeforge import ExactLattice, build_leech, glue_space_L, sqrt2_e8, verify_196560_identity
from .orthogroup import BlockIsometry, Isometry, canonicalize_S, stab_S_generators, wreath_decompose
from .quadspace import QuadraticSpace, build_S, check_cond1, classify_w4, hyperbolic_space, standard_pair
from .voashadow import dim_weight2, rv_space

__version__ = "0.1.0"
