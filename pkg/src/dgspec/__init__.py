"""Spectral analysis of directed graphs via their asymmetric random-walk
transition matrices: mixing inequalities over subset pairs, exact directed
toughness, and the spectral toughness lower bound.
"""

from .errors import (
    ConvergenceError,
    DefectiveMatrixError,
    DgspecError,
    EdgeListParseError,
    NumericalError,
    PreconditionError,
    SingularMatrixError,
)
from .graph import (
    DirectedGraph,
    SccDecomposition,
    chord_cycle,
    complete_bidirected,
    de_bruijn,
    generate,
    graph_from_edges,
    induced_subgraph,
    is_strongly_connected,
    parse_edge_list,
    period,
    petersen,
    random_strongly_connected,
    scc,
    undirected_cycle,
    write_edge_list,
)
from .linalg import (
    EigenDecomposition,
    condition_number,
    determinant,
    eigendecompose_nonsymmetric,
    invert,
    lu_solve,
    operator_norm,
)
from .markov import (
    SpectralProfile,
    SymbolCheck,
    TransitionMatrix,
    build_transition_matrix,
    eml_symbol_check,
    spectral_profile,
    stationary_distribution,
)
from .mixing import (
    AlonChungReport,
    EmlReport,
    SubsetPair,
    alon_chung_bound,
    alon_chung_sweep,
    eml_bound,
    eml_bound_simple,
    eml_lhs,
    verify_eml,
)
from .reports import (
    AnalysisReport,
    RunConfig,
    analysis_report,
    render,
    report_from_json,
    to_json,
)
from .toughness import (
    INFINITE,
    BoundComparison,
    ToughnessResult,
    alon_toughness_bound,
    compare_bounds,
    exact_toughness,
    toughness_spectral_bound,
)

__version__ = "0.1.0"
