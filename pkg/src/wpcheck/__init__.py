"""Exact recognition of weighted plurality rules, voter effects and aggregation checks."""
from .decide import (
    DecisionOutcome,
    RivalWitness,
    Verdict,
    build_dual,
    build_primal,
    canonical_labels,
    decide,
    extract_witness,
    verify_rival_witness,
    verify_weights,
    verify_witness,
)
from .dist import (
    ExplicitDistribution,
    ProductDistribution,
    expected_weights,
    marginal,
    probability_of,
    sample,
)
from .effects import (
    MonteCarlo,
    aggregation_report,
    covariance_sum,
    effect_scaling_experiment,
    effect_vector,
)
from .lp import LPSolution, StandardFormLP, Status, solve, verify_certificate
from .scf import (
    FirstMatchingVoter,
    FixedWinner,
    SocialChoiceFunction,
    WeightedPluralityRule,
    build_weighted_plurality,
    constant,
    dictator,
    evaluate,
    is_neutral,
    parity,
    permute_alternatives,
    plurality,
    random_neutral_function,
)

__version__ = "0.1.0"
