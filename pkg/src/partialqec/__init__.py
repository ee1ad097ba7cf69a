"""Partial-error-correction metrology toolkit for CSS probe codes."""

from .adaptive import (
    ScheduleEntry,
    ScheduleResult,
    ShapeResult,
    adaptive_schedule,
    bacon_shor_fq,
    baselines,
    majority_vote_contrast_mc,
    optimal_shape,
    row_flip_probability,
)
from .codes import (
    CssCode,
    LogicalSet,
    build_code,
    logical_generators,
    overlap_parity,
    solve_symmetry_operator,
    support_from_indices,
    weight,
)
from .decoder import (
    DecodeResult,
    DistanceTable,
    MatchResult,
    brute_force_mwpm,
    build_distance_table,
    decode,
    decode_batch,
    extract_syndrome,
    mwpm,
)
from .errors import PartialQecError
from .metrology import (
    ChannelComparison,
    DeltaFit,
    QfiEstimate,
    compare_pauli_dephasing,
    expectation_tx,
    fit_delta,
    fqx_analytic,
    fqx_enumeration_oracle,
    fqx_pair_oracle,
    fqz_exhaustive,
    fqz_model,
    fqz_monte_carlo,
    propagated_error,
)
from .noise import (
    ErrorPattern,
    PauliChannel,
    RngSeed,
    bitflip,
    dephasing,
    derive_shard_seed,
    rng_for_shard,
    sample_error,
    sample_error_batch,
    splitmix64,
)

__version__ = "0.1.0"
