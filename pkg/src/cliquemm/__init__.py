"""Clique counting and detection through multi-dimensional and rectangular matrix products."""

from .cliques import (
    ALGORITHMS,
    CountReport,
    FindResult,
    count_alg1,
    count_alg2,
    count_alg3,
    count_bruteforce,
    count_triangle_method,
    count_triangles_ir,
    detect_alg3,
    find_alg1,
    find_alg2,
    find_alg3,
)
from .errors import InputError, LimitExceeded, VerificationError
from .graph import (
    CliqueList,
    Graph,
    common_neighbor_count,
    complete,
    empty,
    emit_edge_list,
    enumerate_cliques,
    extension_set,
    gen_gnp,
    gen_planted,
    is_clique,
    parse_dimacs,
    parse_edge_list,
)
from .guards import Limits
from .matrix import BoolMatrix, IntMatrix, bool_matmul, matmul_blocked, matmul_naive, trace, transpose, two_path_counts
from .multidim import MultiDimProduct, common_neighbors_tensor, find_witness, flatten, kdim_product, kdim_product_reference

__version__ = "0.1.0"
