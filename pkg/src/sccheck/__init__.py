"""Set-valued voting rules at desk scale: optimist/pessimist and
expected-utility manipulability, witness construction, and exhaustive or
sampled verification of the weak-dictator theorem and the equivalence of the
two manipulability notions."""

from .core import (
    Ballot,
    Profile,
    Scc,
    all_ballots,
    all_profiles,
    ballot_rank,
    ballot_unrank,
    best,
    evaluate,
    full_mask,
    full_table,
    mask_members,
    num_profiles,
    optimist_ge,
    outcome_mask,
    pessimist_ge,
    profile_decode,
    profile_index,
    worst,
)
from .ds import (
    DsWitness,
    Lottery,
    ModelInvalidError,
    ProbabilityModel,
    UtilityFunction,
    ds_strategy_proof_given,
    exists_advantageous_utility,
    expected_utility,
    fosd_ge,
    lottery_of,
    optimist_witness,
    pessimist_witness,
    validate_ds_witness,
)
from .io import NamedScc, SccFileError, load_scc, save_scc
from .manipulation import (
    OPTIMIST,
    PESSIMIST,
    HypothesisReport,
    TaylorManipulation,
    check_taylor_hypotheses,
    find_any_taylor_manipulation,
    find_taylor_manipulation,
    is_onto_singletons,
    onto_singleton_witnesses,
    validate_taylor_witness,
    weak_dictators,
)
from .verify import (
    Exhaustive,
    Sample,
    VerificationReport,
    decode_table,
    encode_table,
    enumerate_sccs,
    fixture_sccs,
    mutate_fixture_sccs,
    run_verification,
    sample_sccs,
    table_space_size,
    verify_equivalence,
    verify_taylor,
)

__all__ = [
    "Ballot",
    "Profile",
    "Scc",
    "all_ballots",
    "all_profiles",
    "ballot_rank",
    "ballot_unrank",
    "best",
    "evaluate",
    "full_mask",
    "full_table",
    "mask_members",
    "num_profiles",
    "optimist_ge",
    "outcome_mask",
    "pessimist_ge",
    "profile_decode",
    "profile_index",
    "worst",
    "DsWitness",
    "Lottery",
    "ModelInvalidError",
    "ProbabilityModel",
    "UtilityFunction",
    "ds_strategy_proof_given",
    "exists_advantageous_utility",
    "expected_utility",
    "fosd_ge",
    "lottery_of",
    "optimist_witness",
    "pessimist_witness",
    "validate_ds_witness",
    "NamedScc",
    "SccFileError",
    "load_scc",
    "save_scc",
    "OPTIMIST",
    "PESSIMIST",
    "HypothesisReport",
    "TaylorManipulation",
    "check_taylor_hypotheses",
    "find_any_taylor_manipulation",
    "find_taylor_manipulation",
    "is_onto_singletons",
    "onto_singleton_witnesses",
    "validate_taylor_witness",
    "weak_dictators",
    "Exhaustive",
    "Sample",
    "VerificationReport",
    "decode_table",
    "encode_table",
    "enumerate_sccs",
    "fixture_sccs",
    "mutate_fixture_sccs",
    "run_verification",
    "sample_sccs",
    "table_space_size",
    "verify_equivalence",
    "verify_taylor",
]

__version__ = "0.1.0"
