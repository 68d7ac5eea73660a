"""Quivers with potentials of tagged surface triangulations, with exact arithmetic."""

from .catalog import (
    hexagon_fan,
    markov_potential,
    markov_quiver,
    once_punctured_digon,
    once_punctured_square,
    polygon_fan,
    square,
    three_cycle_qp,
    three_punctured_hexagon,
)
from .cluster import (
    LaurentPoly,
    Seed,
    enumerate_seeds,
    independence_check,
    mutate_seed,
    positive_decomposition,
    principal_fg,
    proper_laurent_check,
    proper_laurent_sweep,
    separation_check,
)
from .errors import *  # noqa: F401,F403
from .jacobian import check_admissibility, jacobian_dim
from .path_algebra import AlgebraElement, Potential, Substitution, cyclic_derivative, cyclic_normal_form
from .qp_calculus import QP, mutate_qp, premutate, split, verify_right_equivalence
from .qp_reps import DecoratedRep, e_invariant, f_polynomial_thin, g_vector, mutate_rep
from .quiver import Arrow, ExchangeMatrix, Quiver, build_quivers, matrix_of_quiver, mutate_quiver, quiver_of_matrix
from .surface import (
    IdealTriangulation,
    SurfaceSpec,
    TaggedTriangulation,
    Triangle,
    enumerate_flip_graph,
    flip_ideal,
    flip_tagged,
    validate,
)
from .surface_qp import potential_of_ideal, potential_of_tagged, verify_flip_mutation

__version__ = "0.1.0"
