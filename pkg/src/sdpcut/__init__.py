"""Kernel similarity graphs, SDP relaxations of balanced graph cuts, and
certification of globally optimal partitions."""

from .certify import (
    CertificateReport,
    GwReport,
    ProximityReport,
    ThresholdEval,
    build_certificate,
    gw_check,
    proximity_check,
    threshold_circles,
    threshold_lines,
    threshold_sbm,
    verify_kkt,
    z_interval,
)
from .datagen import (
    Dataset,
    SbmGraph,
    gen_balls,
    gen_circles_deterministic,
    gen_circles_random,
    gen_lines_deterministic,
    gen_lines_random,
    gen_sbm,
)
from .errors import (
    CertificateIntervalEmpty,
    DegenerateDegree,
    InvalidInput,
    InvalidPartition,
    NotApplicable,
    OracleTooLarge,
    SdpCutError,
)
from .experiments import ExperimentGrid, GridResult, report_thresholds, run_grid
from .kernel_graph import (
    KernelSpec,
    PointSet,
    WeightedGraph,
    build_graph,
    gershgorin_bound,
    laplacian,
    normalized_laplacian,
    random_walk_matrix,
)
from .partition import (
    GroundTruthX,
    Partition,
    PartitionSplit,
    brute_force_min_cut,
    ground_truth_x,
    normalized_cut,
    partitions_agree,
    ratio_cut,
    split,
)
from .sdp import (
    SdpProblem,
    SdpSolution,
    SolverOptions,
    exactness_gap,
    make_problem,
    round_solution,
    solve,
)
from .spectral import Embedding, KMeansResult, embed, kmeans, kmeans_objective_at, spectral_cluster

__version__ = "0.1.0"
