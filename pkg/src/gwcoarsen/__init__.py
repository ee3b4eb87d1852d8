"""Spectrum-preserving graph coarsening with GW distance guarantees."""

from .coarsening import (
    CoarseningOperators,
    Magnitude,
    Partition,
    build_operators,
    coarsen_adjacency,
    coarsen_laplacian,
    coarsen_similarity,
    identity_partition,
    membership_transport_plan,
)
from .eig import Spectrum, sym_eig
from .errors import (
    AccumulationScaleWarning,
    DegenerateMarginal,
    DimensionMismatch,
    EmptyCluster,
    GwCoarsenError,
    InfeasiblePlan,
    InvariantViolation,
    NotPSD,
    NotSymmetric,
    ParseError,
    SizeLimit,
    TooFewEdges,
    ZeroClusterMass,
    ZeroDegreeNode,
    ZeroDegreeSupernode,
    ZeroEigenvalue,
    ZeroMarginal,
    ZeroTotalMass,
)
from .graphs import (
    Graph,
    MassScheme,
    MeasureNetwork,
    SimilarityKind,
    build_similarity,
    load_collection,
    load_graph,
    save_collection,
    to_measure_network,
)
from .gw import (
    GwConfig,
    GwMatrixResult,
    GWResult,
    decompose_I123,
    gw_cost,
    gw_matrix,
    normalized_plan_norm,
    solve_gw,
    srgw_optimal_similarity,
)
from .kgc import (
    InitFromPartition,
    InitPlusPlus,
    InitRandom,
    KgcConfig,
    KgcResult,
    heavy_edge_baseline,
    init_plusplus,
    objective,
    point_cluster_dist2,
    refine,
    run_kgc,
    trace_objective,
)
from .ot import (
    TransportPlan,
    diagonal_plan,
    product_plan,
    random_feasible_plan,
    solve_inner_ot,
)
from .spectral import (
    PairBoundReport,
    SingleBoundReport,
    SpectralDifference,
    bound_pair,
    bound_single,
    solve_with_membership,
    spectral_difference,
    spectrum_error_top_k,
)
from .synthetic import erdos_renyi, stochastic_block, synthetic_collection

__version__ = "0.1.0"

__all__ = [
    "AccumulationScaleWarning",
    "CoarseningOperators",
    "DegenerateMarginal",
    "DimensionMismatch",
    "EmptyCluster",
    "Graph",
    "GwCoarsenError",
    "GwConfig",
    "GwMatrixResult",
    "GWResult",
    "InfeasiblePlan",
    "InitFromPartition",
    "InitPlusPlus",
    "InitRandom",
    "InvariantViolation",
    "KgcConfig",
    "KgcResult",
    "Magnitude",
    "MassScheme",
    "MeasureNetwork",
    "NotPSD",
    "NotSymmetric",
    "PairBoundReport",
    "ParseError",
    "Partition",
    "SimilarityKind",
    "SingleBoundReport",
    "SizeLimit",
    "SpectralDifference",
    "Spectrum",
    "TooFewEdges",
    "TransportPlan",
    "ZeroClusterMass",
    "ZeroDegreeNode",
    "ZeroDegreeSupernode",
    "ZeroEigenvalue",
    "ZeroMarginal",
    "ZeroTotalMass",
    "bound_pair",
    "bound_single",
    "build_operators",
    "build_similarity",
    "coarsen_adjacency",
    "coarsen_laplacian",
    "coarsen_similarity",
    "decompose_I123",
    "diagonal_plan",
    "erdos_renyi",
    "gw_cost",
    "gw_matrix",
    "heavy_edge_baseline",
    "identity_partition",
    "init_plusplus",
    "load_collection",
    "load_graph",
    "membership_transport_plan",
    "normalized_plan_norm",
    "objective",
    "point_cluster_dist2",
    "product_plan",
    "random_feasible_plan",
    "refine",
    "run_kgc",
    "save_collection",
    "solve_gw",
    "solve_inner_ot",
    "solve_with_membership",
    "spectral_difference",
    "spectrum_error_top_k",
    "srgw_optimal_similarity",
    "stochastic_block",
    "sym_eig",
    "synthetic_collection",
    "to_measure_network",
    "trace_objective",
]
