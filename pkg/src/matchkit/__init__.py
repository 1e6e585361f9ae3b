"""Two-sided one-to-one matching toolkit.

Deferred acceptance and stable-set enumeration, tree-single-peaked preference
domains, domain property checks with constructive witnesses, exhaustive
incentive audits, and an independent rule-existence oracle.
"""

__version__ = "0.1.0"

from ._core import BACKEND
from .model import (
    BudgetError,
    InputError,
    Market,
    MatchkitError,
    Matching,
    PreconditionError,
    Preference,
    Profile,
    validate_profile,
)
from .trees import (
    Tree,
    TreeShape,
    classify_five_node_subtrees,
    enumerate_maximal_single_peaked,
    is_single_peaked,
    is_single_peaked_linear,
    make_tree,
)
from .da import (
    StableSet,
    blocking_pairs,
    deferred_acceptance,
    enumerate_stable,
    extremal_bounds_ok,
    is_stable,
    random_profile,
)
from .domains import (
    DomainPair,
    PatternWitness,
    PreferenceSet,
    check_tree_single_peaked,
    find_rotation_violation,
    find_td_violation,
    forced_rotation_witness,
    is_rich,
    missing_tops,
    oriented_rotation_violation,
    rich_rotation_sweep,
    satisfies_rotation,
    satisfies_td,
    td_selection,
    td_triple_witness,
    witness_holds,
)
from .audits import (
    AuditWitness,
    MPDA,
    ProfileSpace,
    Rule,
    WPDA,
    apply_rule,
    audit_group,
    audit_non_bossiness,
    audit_strategy_proofness,
    outcome_table,
)
from .replication import (
    CLAIMS,
    Gadget,
    OracleResult,
    TheoremReport,
    build_bossiness_gadget,
    build_manipulation_gadget,
    canonical_market,
    canonical_trees,
    maximal_domain,
    rule_existence_oracle,
    td_domain,
    verify_all,
    verify_theorem,
)

__all__ = [
    "BACKEND",
    "__version__",
    "MatchkitError",
    "InputError",
    "BudgetError",
    "PreconditionError",
    "Market",
    "Preference",
    "Profile",
    "Matching",
    "validate_profile",
    "Tree",
    "TreeShape",
    "make_tree",
    "is_single_peaked",
    "is_single_peaked_linear",
    "enumerate_maximal_single_peaked",
    "classify_five_node_subtrees",
    "deferred_acceptance",
    "blocking_pairs",
    "is_stable",
    "StableSet",
    "enumerate_stable",
    "extremal_bounds_ok",
    "random_profile",
    "PreferenceSet",
    "DomainPair",
    "PatternWitness",
    "witness_holds",
    "missing_tops",
    "is_rich",
    "find_td_violation",
    "satisfies_td",
    "find_rotation_violation",
    "satisfies_rotation",
    "oriented_rotation_violation",
    "check_tree_single_peaked",
    "td_triple_witness",
    "forced_rotation_witness",
    "td_selection",
    "rich_rotation_sweep",
    "ProfileSpace",
    "Rule",
    "MPDA",
    "WPDA",
    "apply_rule",
    "outcome_table",
    "AuditWitness",
    "audit_strategy_proofness",
    "audit_non_bossiness",
    "audit_group",
    "CLAIMS",
    "canonical_market",
    "canonical_trees",
    "maximal_domain",
    "td_domain",
    "Gadget",
    "build_manipulation_gadget",
    "build_bossiness_gadget",
    "OracleResult",
    "rule_existence_oracle",
    "TheoremReport",
    "verify_theorem",
    "verify_all",
]
