"""k-uniform hypergraph algorithms: tight paths and cycles, robust-subgraph
families, connectable-triple indexes, reservoir connections, absorbers, an
end-to-end absorption pipeline for dense 4-uniform hosts, counting-lemma
verifiers, and lower-tail concentration bounds with exact oracles.

Hot kernels run on a compiled backend when the extension is importable and
fall back to pure Python otherwise (force the fallback with HYPERHAM_PURE=1);
results are identical either way.
"""

from importlib.metadata import PackageNotFoundError, version as _dist_version

try:
    __version__ = _dist_version("hyperham")
except PackageNotFoundError:  # running from a checkout without an install
    __version__ = "0+unknown"

from ._kernels import BACKEND as KERNEL_BACKEND, available_backends
from .hypercore import (
    Hypergraph,
    HypergraphError,
    ParseError,
    parse,
    serialize,
)
from .extremal import (
    GenerationError,
    LabeledPartition,
    construction_a,
    construction_b,
    random_hypergraph,
    random_with_min_pair_degree,
)
from .tightpaths import (
    TightCycle,
    TightPath,
    TightWalk,
    find_tight_hamiltonian_brute,
    greedy_path_cover,
    validate,
)
from .robust import (
    RobustCertificate,
    blakley_roy_gap,
    check_lemma_L36,
    count_walks_length3,
    extract_robust_subgraph,
    is_robust,
    robust_constants,
)
from .connectivity import (
    VERIFIER_IDS,
    ConnectivityIndex3,
    ConnectivityIndex4,
    FamilyBuildError,
    RobustFamily3,
    RobustFamily4,
    VerifierReport,
    bridges3,
    bridges4,
    build_family3,
    build_family4,
    connectable_pairs,
    connectable_triples,
    verify_counting_lemma,
)
from .connector import (
    BudgetExceeded,
    PreconditionError,
    ReservoirFailure,
    ReservoirState,
    connect3,
    connect4,
    residue_lengths,
    reserve_connect,
    sample_reservoir,
)
from .absorption import (
    AbsorbConfig,
    Absorber,
    AbsorbingPath,
    absorb,
    build_absorbing_path,
    find_absorber,
    find_elves,
)
from .pipeline import (
    PipelineConfig,
    PipelineFailure,
    PipelineResult,
    find_hamiltonian_absorption,
    make_block_partition,
    path_cover,
    society_stats,
    validate_result,
)
from .concentration import (
    WeightSystem,
    block_sampling_bound,
    block_sampling_check,
    bounded_tail_bound,
    bounded_tail_check,
    janson_bound,
    janson_exact_tail,
    janson_mc_tail,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "available_backends",
    # hypercore
    "Hypergraph",
    "HypergraphError",
    "ParseError",
    "parse",
    "serialize",
    # extremal
    "GenerationError",
    "LabeledPartition",
    "construction_a",
    "construction_b",
    "random_hypergraph",
    "random_with_min_pair_degree",
    # tightpaths
    "TightCycle",
    "TightPath",
    "TightWalk",
    "find_tight_hamiltonian_brute",
    "greedy_path_cover",
    "validate",
    # robust
    "RobustCertificate",
    "blakley_roy_gap",
    "check_lemma_L36",
    "count_walks_length3",
    "extract_robust_subgraph",
    "is_robust",
    "robust_constants",
    # connectivity
    "VERIFIER_IDS",
    "ConnectivityIndex3",
    "ConnectivityIndex4",
    "FamilyBuildError",
    "RobustFamily3",
    "RobustFamily4",
    "VerifierReport",
    "bridges3",
    "bridges4",
    "build_family3",
    "build_family4",
    "connectable_pairs",
    "connectable_triples",
    "verify_counting_lemma",
    # connector
    "BudgetExceeded",
    "PreconditionError",
    "ReservoirFailure",
    "ReservoirState",
    "connect3",
    "connect4",
    "residue_lengths",
    "reserve_connect",
    "sample_reservoir",
    # absorption
    "AbsorbConfig",
    "Absorber",
    "AbsorbingPath",
    "absorb",
    "build_absorbing_path",
    "find_absorber",
    "find_elves",
    # pipeline
    "PipelineConfig",
    "PipelineFailure",
    "PipelineResult",
    "find_hamiltonian_absorption",
    "make_block_partition",
    "path_cover",
    "society_stats",
    "validate_result",
    # concentration
    "WeightSystem",
    "block_sampling_bound",
    "block_sampling_check",
    "bounded_tail_bound",
    "bounded_tail_check",
    "janson_bound",
    "janson_exact_tail",
    "janson_mc_tail",
]
