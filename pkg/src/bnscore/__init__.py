"""Dirichlet-multinomial scores, Bayesian entropy estimators, and structure
search for discrete Bayesian networks."""

from .analysis import (
    Preference,
    RegularityResult,
    SweepCurve,
    SweepRecord,
    alpha_sweep,
    bayes_factor,
    default_grid,
    me_prefer,
    regularity_check,
)
from .dag import (
    Dag,
    format_dag,
    is_acyclic,
    parse_dag,
    same_equivalence_class,
    skeleton,
    to_dot,
    topological_order,
    v_structures,
)
from .dataset import Dataset, LocalCounts, Variable, builtin_examples, counts, load_csv
from .entropy import (
    EntropyReport,
    empirical_entropy,
    entropy_report,
    lemma1_approx,
    lemma1_bias,
    marginal_posterior_entropy,
    mc_expected_entropy,
    me_score,
    posterior_expected_entropy,
    unobserved_config_term,
)
from .errors import BnscoreError, FormatError, MissingDataError, PriorSupportError
from .learn import HillClimbResult, Move, all_dags, exhaustive_best, hill_climb, neighbors
from .scores import (
    AlphaSpec,
    AlphaTable,
    BicSpec,
    TermDecomposition,
    alpha_table,
    bdeu_term_decomposition,
    bdla_grid,
    d_edf,
    effective_iss,
    effective_params,
    effective_params_total,
    local_bic,
    local_log_bd,
    local_log_bdla,
    local_score,
    total_score,
)
from .specfun import digamma, log_gamma

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec",
    "AlphaTable",
    "BicSpec",
    "BnscoreError",
    "Dag",
    "Dataset",
    "EntropyReport",
    "FormatError",
    "HillClimbResult",
    "LocalCounts",
    "MissingDataError",
    "Move",
    "Preference",
    "PriorSupportError",
    "RegularityResult",
    "SweepCurve",
    "SweepRecord",
    "TermDecomposition",
    "Variable",
    "all_dags",
    "alpha_sweep",
    "alpha_table",
    "bayes_factor",
    "bdeu_term_decomposition",
    "bdla_grid",
    "builtin_examples",
    "counts",
    "d_edf",
    "default_grid",
    "digamma",
    "effective_iss",
    "effective_params",
    "effective_params_total",
    "empirical_entropy",
    "entropy_report",
    "exhaustive_best",
    "format_dag",
    "hill_climb",
    "is_acyclic",
    "lemma1_approx",
    "lemma1_bias",
    "load_csv",
    "local_bic",
    "local_log_bd",
    "local_log_bdla",
    "local_score",
    "log_gamma",
    "marginal_posterior_entropy",
    "mc_expected_entropy",
    "me_prefer",
    "me_score",
    "neighbors",
    "parse_dag",
    "posterior_expected_entropy",
    "regularity_check",
    "same_equivalence_class",
    "skeleton",
    "to_dot",
    "topological_order",
    "total_score",
    "unobserved_config_term",
    "v_structures",
]
