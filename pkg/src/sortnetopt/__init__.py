"""Optimal-size sorting network prover and skeptical checker."""

from .driver import (
    Answer,
    RunOutcome,
    brute_force_min_size,
    default_size_budget,
    find_sorting_network,
    generate_and_prune,
)
from .networks import (
    MAX_CHANNELS,
    CapacityError,
    Comparator,
    Network,
    OutputSet,
    all_standard_comparators,
    apply_comparator,
    is_sorted,
    is_sorting_network,
    outputs,
    run_network,
    sort_integers,
)
from .perms import (
    InvalidImageList,
    Permutation,
    apply_to_network,
    apply_to_output_set,
    apply_to_vector,
    identity,
    inverse,
    standardize,
    transposition,
    validate_image_list,
)
from .search import (
    CandidateSet,
    SubsumptionWitness,
    check_subsumption,
    find_subsumption,
    generate,
    generate_irredundant,
    last_comparator_redundant,
    prune_search,
    prune_with_oracle,
)
from .witnesslog import LogReader, LogWriter, WitnessLog, parse_log, serialize_log

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "CandidateSet",
    "CapacityError",
    "Comparator",
    "InvalidImageList",
    "LogReader",
    "LogWriter",
    "MAX_CHANNELS",
    "Network",
    "OutputSet",
    "Permutation",
    "RunOutcome",
    "SubsumptionWitness",
    "WitnessLog",
    "all_standard_comparators",
    "apply_comparator",
    "apply_to_network",
    "apply_to_output_set",
    "apply_to_vector",
    "brute_force_min_size",
    "check_subsumption",
    "default_size_budget",
    "find_sorting_network",
    "find_subsumption",
    "generate",
    "generate_and_prune",
    "generate_irredundant",
    "identity",
    "inverse",
    "is_sorted",
    "is_sorting_network",
    "last_comparator_redundant",
    "outputs",
    "parse_log",
    "prune_search",
    "prune_with_oracle",
    "run_network",
    "serialize_log",
    "sort_integers",
    "standardize",
    "transposition",
    "validate_image_list",
]
