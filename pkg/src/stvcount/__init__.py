"""Deterministic, seed-replayable randomized STV counting."""

from .model import (
    BallotPaper,
    Candidate,
    Election,
    LastParcelRule,
    RuleConfig,
    ValidationError,
    compute_droop_quota,
    validate_election,
)
from .randomness import (
    PrngStream,
    SeedCeremonyRecord,
    derive_seed,
    fork_substream,
)
from .engine import (
    CountResult,
    EngineInvariantError,
    Parcel,
    Transcript,
    TransferKind,
    apply_rounding,
    compute_last_parcel,
    countback_tiebreak,
    distribute_exclusion,
    plan_surplus_distribution,
    run_count,
    select_exclusion,
    select_papers_for_transfer,
)
from .formats import (
    BallotFormatError,
    ManifestError,
    load_election,
    parse_ballot_file,
    parse_candidate_manifest,
    write_probability_report,
    write_transcript,
)
from .simulate import (
    EnumerationBudgetError,
    SimulationReport,
    VariantComparison,
    compare_variants,
    exact_probabilities,
    run_trials,
)

__version__ = "0.1.0"

__all__ = [
    "BallotPaper",
    "BallotFormatError",
    "Candidate",
    "CountResult",
    "Election",
    "EngineInvariantError",
    "EnumerationBudgetError",
    "LastParcelRule",
    "ManifestError",
    "Parcel",
    "PrngStream",
    "RuleConfig",
    "SeedCeremonyRecord",
    "SimulationReport",
    "Transcript",
    "TransferKind",
    "ValidationError",
    "VariantComparison",
    "apply_rounding",
    "compare_variants",
    "compute_droop_quota",
    "compute_last_parcel",
    "countback_tiebreak",
    "derive_seed",
    "distribute_exclusion",
    "exact_probabilities",
    "fork_substream",
    "load_election",
    "parse_ballot_file",
    "parse_candidate_manifest",
    "plan_surplus_distribution",
    "run_count",
    "run_trials",
    "select_exclusion",
    "select_papers_for_transfer",
    "validate_election",
    "write_probability_report",
    "write_transcript",
]
