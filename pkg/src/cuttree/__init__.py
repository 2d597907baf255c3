"""Cut-equivalent trees of connected simple graphs.

Classical construction, an expander-decomposition-guided construction, and
the oracles needed to certify both.
"""

from .expander import (
    CertificationError,
    ConductanceCertificate,
    ExpanderDecomposition,
    conductance,
    decompose,
    parse_decomposition,
    serialize_decomposition,
    size_class_of,
)
from .fastgh import (
    AlgoParams,
    DichotomyViolation,
    ExploreError,
    ExploreOutcome,
    ExploreTrace,
    NodeContext,
    PrepAbort,
    RunManifest,
    classify_vertex,
    cond_gomory_hu,
    degree_classes,
    explore_prepare,
    explore_tree,
    sample_pivots,
    uncond_gomory_hu,
)
from .generators import FAMILIES, GeneratorSpec, generate
from .ghtree import (
    PartitionTree,
    all_pairs_tree_values,
    auxiliary_graph,
    classic_gomory_hu,
    gh_step,
    k_partial_tree,
    parse_tree,
    refine,
    serialize_tree,
    tree_min_cut_query,
)
from .graph import (
    AugmentedSubgraph,
    DisconnectedGraphError,
    FlowNetwork,
    GraphParseError,
    SimpleGraph,
    augment,
    contract,
    dump_graph,
    identity_network,
    load_graph,
)
from .harness import (
    BruteForceOracle,
    VerificationReport,
    bench,
    brute_force_all_cuts,
    verify_tree,
)
from .isolating import IsolatingResult, isolating_cuts
from .maxflow import (
    Cut,
    FlowCounters,
    NetworkSolver,
    latest_min_cut,
    max_flow,
    min_cut_value_matrix,
)

__version__ = "0.1.0"
