"""Chronology-aware compression of temporal network snapshot sequences.

Quantifies how much a diffusion process cares about the ordering of
consecutive network snapshots, using a third-order commutator expansion
of the snapshot propagators, and uses that score to greedily merge the
pairs whose chronology matters least.  Validation integrates the full
susceptible-infected dynamics over the original and compressed sequences
and measures the distance between the infection curves.
"""

from .compress import (
    CompressionResult,
    ErrorProfile,
    MergeStep,
    error_profile,
    even_compress,
    greedy_compress,
    pre_aggregate,
)
from .diffusion import (
    IntegrationError,
    IntegratorConfig,
    Trajectory,
    integrate_si,
    matrix_exponential,
    pair_endpoints,
    propagate_linear,
)
from .ingest import (
    ActivityDriven,
    ContactEvent,
    ContactStream,
    DataError,
    DegreeSequence,
    SynthConfig,
    UniformRandom,
    alternating_profile,
    bin_contacts,
    generate_synthetic,
    parse_contacts,
    ramp_profile,
    sequence_from_dict,
    sequence_to_dict,
)
from .pair_error import (
    PairError,
    bch_third_order,
    difference_matrix_end,
    difference_matrix_mid,
    epsilon_end,
    epsilon_mid,
    xi,
)
from .snapshots import (
    Snapshot,
    SnapshotError,
    SnapshotSequence,
    aggregate,
    aggregate_group,
    initial_condition,
    tau_bounds,
    transmission_operator,
)
from .validation import (
    SweepEntry,
    ValidationReport,
    compare_regimes,
    compression_sweep,
    validation_distance,
)

__version__ = "0.1.0"

__all__ = [
    "Snapshot",
    "SnapshotError",
    "SnapshotSequence",
    "aggregate",
    "aggregate_group",
    "transmission_operator",
    "initial_condition",
    "tau_bounds",
    "IntegrationError",
    "IntegratorConfig",
    "Trajectory",
    "matrix_exponential",
    "integrate_si",
    "propagate_linear",
    "pair_endpoints",
    "PairError",
    "bch_third_order",
    "difference_matrix_end",
    "difference_matrix_mid",
    "epsilon_end",
    "epsilon_mid",
    "xi",
    "MergeStep",
    "CompressionResult",
    "ErrorProfile",
    "greedy_compress",
    "even_compress",
    "error_profile",
    "pre_aggregate",
    "DataError",
    "ContactEvent",
    "ContactStream",
    "parse_contacts",
    "bin_contacts",
    "UniformRandom",
    "DegreeSequence",
    "ActivityDriven",
    "SynthConfig",
    "generate_synthetic",
    "alternating_profile",
    "ramp_profile",
    "sequence_to_dict",
    "sequence_from_dict",
    "ValidationReport",
    "SweepEntry",
    "validation_distance",
    "compare_regimes",
    "compression_sweep",
    "__version__",
]
