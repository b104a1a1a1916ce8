"""Interaction-calculus workbench: reduction, expansion, reversibility and upward confluence."""
from ._kernel import BACKEND
from .analysis import (
    ClashWitness,
    ReversibilityReport,
    arity_characterization,
    clash_witness,
    completeness_check,
    is_connected,
    is_reversible_rule,
    reversibility_report,
)
from .core import (
    Agent,
    Configuration,
    Equation,
    FreshNames,
    PreconditionError,
    Rule,
    System,
    agent,
    canonical_key,
    canonicalize,
    congruent,
    make_config,
    validate_config,
    validate_system,
)
from .lab import (
    BUILTINS,
    DiamondReport,
    FailureWitness,
    JoinResult,
    builtin,
    common_predecessor,
    counterexample_search,
    diamond_check,
    linlam_join,
    plus_join,
    random_config,
    random_peaks,
    strong_failure_witness,
)
from .rewrite import Step, Trace, interact, indirect, normalize, steps
from .textio import ParseError, parse_config, parse_system, parse_term, print_config, print_report
from .unrewrite import Expansion, expansions, interaction_expansions, indirection_expansions

__version__ = "0.1.0"
