"""Exact computation of bisectors, k-metric generators and dimension
sequences of finite metric spaces and graphs."""

from .errors import (
    AsymmetricDistance,
    BadFamilyParams,
    DisconnectedGraph,
    DuplicateLabel,
    FormatError,
    InstanceTooLarge,
    KMetricError,
    LabelCollision,
    NegativeDistance,
    NonpositiveParameter,
    SamePoint,
    TriangleViolation,
    ZeroOffDiagonal,
)
from .families import (
    DivergenceReport,
    ExpectedSequence,
    FamilySpec,
    divergence_evidence,
    expected_sequence,
    make,
    make_space,
    parse_family,
)
from .graphs import (
    Graph,
    build_graph,
    check_odd_distance_bisectors,
    format_edge_list,
    is_bipartite,
    parse_edge_list,
    shortest_path_metric,
)
from .solver import (
    INFINITY,
    DimensionSequence,
    ExtendedNat,
    SolveReport,
    dim_bruteforce,
    dim_exact,
    dimension_sequence,
    greedy_upper,
    sequence_with_reports,
)
from .spaces import (
    DistinguisherMap,
    FiniteMetricSpace,
    KGeneratorCertificate,
    PointSet,
    TwoPointSpaceWarning,
    all_distinguishers,
    bisector,
    build_space,
    distinguishers,
    dump_space,
    is_k_generator,
    join,
    load_space,
    max_k,
    permute_space,
    truncate,
)

__version__ = "0.1.0"
