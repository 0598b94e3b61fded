"""Vertex-graph / edge-graph duality of binary relation matrices."""

from .edge_graph import (
    BlockDecomposition,
    EdgeGraphModel,
    build_edge_graph,
    decompose_blocks,
    f_matrix,
    transit_adjacency,
    validate_duality,
)
from .errors import DgdualError
from .hamilton import (
    CycleSet,
    EulerPartial,
    brute_force_hamilton,
    euler_partial_graphs,
    hamilton_cycles,
    hamilton_from_euler,
    realizability_oracle,
)
from .matrix import (
    BinaryMatrix,
    Digraph,
    circuit_rank,
    cyclomatic_number,
    digraph_from_vertex_matrix,
    edge_adjacency_of,
    minor,
    parse_matrix,
    row_col_sums,
    serialize_matrix,
    weak_components,
)
from .normal_form import (
    CheckReport,
    TransformTrace,
    c_matrix,
    canonical_check,
    canonicalize,
    delta_n,
    quasicanonical_check,
    quasinormalize,
    replay,
    s_matrix,
)
from .reduction import FormingResult, is_forming, reduce_step, reduce_to_forming, sigma_diagonal

__version__ = "0.1.0"
