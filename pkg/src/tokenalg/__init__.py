"""Exact computations on k-token graphs, their Laplacian algebras and Johnson graphs."""

from .algebras import (
    check_commute,
    commute_iff_token,
    elementary_adjacency,
    elementary_laplacian,
    global_algebra,
    local_algebra,
    pairing_table,
    recognize_token_graph,
)
from .graphs import Graph, adjacency, complement, complete_graph, laplacian, read_graph
from .johnson import (
    IntersectionArray,
    bose_mesner_check,
    johnson_graph,
    johnson_intersection_array,
    johnson_laplacian_spectrum,
    quotient_matrix,
    verify_M_identity,
)
from .linalg import ExactMatrix, RatPoly, char_poly, rank
from .orthopoly import (
    hoffman_connected_check,
    hoffman_regular_check,
    is_distance_regular,
    predistance_family,
    scalar_product,
)
from .spectra import Spectrum, exact_spectrum, joint_spectrum, spectrum
from .tokens import binomial_matrix, token_graph, verify_token_theorem

__all__ = [
    "adjacency",
    "binomial_matrix",
    "bose_mesner_check",
    "char_poly",
    "check_commute",
    "commute_iff_token",
    "complement",
    "complete_graph",
    "elementary_adjacency",
    "elementary_laplacian",
    "exact_spectrum",
    "ExactMatrix",
    "global_algebra",
    "Graph",
    "hoffman_connected_check",
    "hoffman_regular_check",
    "IntersectionArray",
    "is_distance_regular",
    "johnson_graph",
    "johnson_intersection_array",
    "johnson_laplacian_spectrum",
    "joint_spectrum",
    "laplacian",
    "local_algebra",
    "pairing_table",
    "predistance_family",
    "quotient_matrix",
    "rank",
    "RatPoly",
    "read_graph",
    "recognize_token_graph",
    "scalar_product",
    "Spectrum",
    "spectrum",
    "token_graph",
    "verify_M_identity",
    "verify_token_theorem",
]

__version__ = "0.1.0"
