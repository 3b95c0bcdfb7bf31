"""Function model, collision profiles, hybrid reductions, Grover simulation and distinguishers."""

from .function_model import (
    FunctionTable,
    CountingOracle,
    query,
    sample_uniform_function,
    sample_uniform_permutation,
    conjugate,
    uniform_function_sampler,
    uniform_permutation_sampler,
)
from .collision_profiles import (
    CollisionProfile,
    multiplicity,
    multiplicities,
    profile_of,
    maxload,
    is_good,
    collision_equivalent,
    canonical_function,
    sample_from_profile,
    profile_sampler,
    class_size,
    enumerate_class,
)
from .hybrids_reductions import (
    IndexPartition,
    HybridSequence,
    RelationWitness,
    EmbeddedOracle,
    partition_indices,
    build_hybrids,
    embed_collision_instance,
    small_mass,
    build_related_pair,
    check_relation_witness,
)
from .quantum_query_sim import (
    StateVector,
    BooleanOracle,
    uniform_state,
    apply_phase_oracle,
    apply_diffusion,
    grover_success_probability,
    optimal_iterations,
    grover_search,
    bbht_search,
)
from .distinguishers import (
    DistinguisherReport,
    BiasEstimate,
    ConjugatedOracle,
    classical_birthday,
    build_marked_oracle,
    bht_distinguisher,
    conjugated_distinguisher,
    amplify,
    estimate_bias,
    measure_hybrid_gaps,
    worst_case_distinguisher,
)

__all__ = [
    "FunctionTable",
    "CountingOracle",
    "query",
    "sample_uniform_function",
    "sample_uniform_permutation",
    "conjugate",
    "uniform_function_sampler",
    "uniform_permutation_sampler",
    "CollisionProfile",
    "multiplicity",
    "multiplicities",
    "profile_of",
    "maxload",
    "is_good",
    "collision_equivalent",
    "canonical_function",
    "sample_from_profile",
    "profile_sampler",
    "class_size",
    "enumerate_class",
    "IndexPartition",
    "HybridSequence",
    "RelationWitness",
    "EmbeddedOracle",
    "partition_indices",
    "build_hybrids",
    "embed_collision_instance",
    "small_mass",
    "build_related_pair",
    "check_relation_witness",
    "StateVector",
    "BooleanOracle",
    "uniform_state",
    "apply_phase_oracle",
    "apply_diffusion",
    "grover_success_probability",
    "optimal_iterations",
    "grover_search",
    "bbht_search",
    "DistinguisherReport",
    "BiasEstimate",
    "ConjugatedOracle",
    "classical_birthday",
    "build_marked_oracle",
    "bht_distinguisher",
    "conjugated_distinguisher",
    "amplify",
    "estimate_bias",
    "measure_hybrid_gaps",
    "worst_case_distinguisher",
]
