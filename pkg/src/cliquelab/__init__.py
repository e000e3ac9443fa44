"""Clique-product constructions, reductions, and desk-scale verification.

The package builds randomized graph products of planted-clique instances,
carries their solutions through a family of budget problems (densest
k-subgraph, smallest k-edge subgraph, Steiner forests, directed Steiner
networks, dense subhypergraphs, induced pattern detection), and checks the
supporting combinatorial lemmas with exact oracles at desk scale.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .caps import DEFAULT_ENUM_CAP, MATERIALIZE_CAP, VERTEX_CAP, check_enum, enum_cap
from .ensembles import (
    GENERATOR_ID,
    PlantedInstance,
    Seed,
    as_fraction,
    as_probability,
    as_seed,
    expected_er_edges,
    planted_kappa,
    sample_er,
    sample_pattern,
    sample_planted,
    uniform_subset,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    CliquelabError,
    InfeasibleError,
    PatternSearchTimeout,
)
from .graph import Graph, Hypergraph, WeightedDigraph, peel_to_min_degree
from .oracles import (
    DsnInstance,
    SteinerForestInstance,
    clique_list,
    clique_number,
    contains_ktt,
    count_bicliques,
    count_cliques,
    den_leq_k,
    densest_k_subgraph,
    densest_k_subhypergraph,
    detect_pattern,
    directed_steiner_network,
    is_biclique,
    max_balanced_biclique,
    max_clique,
    satisfied_demands,
    smallest_k_edge_subgraph,
    steiner_k_forest,
)
from .reductions import (
    ReductionCertificate,
    biclique_to_dksh,
    dks_from_biclique,
    dks_to_induced_pattern,
    dks_via_skes,
    dsn_cross_edge_property,
    ell_for_ratio,
    extract_dksh_solution,
    extract_dsn_solution,
    extract_skes_from_forest,
    lemma44_bound,
    skes_to_dsn,
    skes_to_steiner_forest,
)
from .rgp import (
    SIDE_CONDITION_NAMES,
    DisperserReport,
    EdgeRuleReport,
    RgpParams,
    SubsetFamily,
    check_disperser,
    check_edge_rule,
    check_side_conditions_exact,
    implied_edges,
    paper_params,
    product_edge,
    product_graph,
    rgp,
    sample_family,
)
from .verify import (
    TrialReport,
    clopper_pearson,
    den_mean_confidence,
    exact_tail_p_value,
    rate_verdict,
    verify_averaging,
    verify_averaging_trials,
    verify_completeness,
    verify_disperser,
    verify_lemma44,
    verify_soundness_structure,
)

__all__ = [
    "__version__",
    "DEFAULT_ENUM_CAP",
    "MATERIALIZE_CAP",
    "VERTEX_CAP",
    "check_enum",
    "enum_cap",
    "GENERATOR_ID",
    "PlantedInstance",
    "Seed",
    "as_fraction",
    "as_probability",
    "as_seed",
    "expected_er_edges",
    "planted_kappa",
    "sample_er",
    "sample_pattern",
    "sample_planted",
    "uniform_subset",
    "BudgetExceeded",
    "CapExceeded",
    "CliquelabError",
    "InfeasibleError",
    "PatternSearchTimeout",
    "Graph",
    "Hypergraph",
    "WeightedDigraph",
    "peel_to_min_degree",
    "DsnInstance",
    "SteinerForestInstance",
    "clique_list",
    "clique_number",
    "contains_ktt",
    "count_bicliques",
    "count_cliques",
    "den_leq_k",
    "densest_k_subgraph",
    "densest_k_subhypergraph",
    "detect_pattern",
    "directed_steiner_network",
    "is_biclique",
    "max_balanced_biclique",
    "max_clique",
    "satisfied_demands",
    "smallest_k_edge_subgraph",
    "steiner_k_forest",
    "ReductionCertificate",
    "biclique_to_dksh",
    "dks_from_biclique",
    "dks_to_induced_pattern",
    "dks_via_skes",
    "dsn_cross_edge_property",
    "ell_for_ratio",
    "extract_dksh_solution",
    "extract_dsn_solution",
    "extract_skes_from_forest",
    "lemma44_bound",
    "skes_to_dsn",
    "skes_to_steiner_forest",
    "SIDE_CONDITION_NAMES",
    "DisperserReport",
    "EdgeRuleReport",
    "RgpParams",
    "SubsetFamily",
    "check_disperser",
    "check_edge_rule",
    "check_side_conditions_exact",
    "implied_edges",
    "paper_params",
    "product_edge",
    "product_graph",
    "rgp",
    "sample_family",
    "TrialReport",
    "clopper_pearson",
    "den_mean_confidence",
    "exact_tail_p_value",
    "rate_verdict",
    "verify_averaging",
    "verify_averaging_trials",
    "verify_completeness",
    "verify_disperser",
    "verify_lemma44",
    "verify_soundness_structure",
]
