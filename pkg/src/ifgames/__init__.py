"""Workbench for independence-friendly logic with chance moves.

Compiles sentences over finite structures into extensive games with
imperfect information, computes their exact equilibrium-semantics truth
values, and answers conditional win-probability queries.
"""

from .errors import (
    BudgetError,
    EventError,
    GameError,
    IfGameError,
    NatureStrategyError,
    ParseError,
    ProfileError,
    StructureError,
    ZeroProbabilityEventError,
)
from .formula import (
    And,
    App,
    ChainAtom,
    ChanceOr,
    ChanceQ,
    Const,
    Exists,
    Forall,
    Formula,
    Literal,
    Or,
    RelAtom,
    Var,
    free_variables,
    implies,
    negate,
    occurrences,
)
from .game import (
    EXIST,
    NATURE,
    UNIV,
    ExtensiveGame,
    InfoSet,
    SemanticGame,
    build_semantic_game,
    export_dot,
    information_partition,
    winner,
)
from .parser import (
    format_formula,
    parse_event,
    parse_extensive_game,
    parse_formula,
    parse_nature_strategy,
    parse_profile,
    parse_structure,
)
from .solver import (
    ClassicalStatus,
    ConditionalValue,
    Equilibrium,
    EventPredicate,
    PayoffMatrix,
    build_matrix,
    classical_status,
    conditional_value,
    expected_payoff,
    mixed_expected_payoff,
    reduce_matrix,
    simulate,
    solve_zero_sum,
    truth_value,
    verify_equilibrium,
)
from .strategy import (
    BehavioralStrategy,
    MixedStrategy,
    PureStrategy,
    ReducedStrategy,
    StrategyList,
    count_pure_strategies,
    embedded_nature,
    enumerate_reduced,
    follows,
    outcome_distribution,
    reduced_from_rules,
    uniform_nature,
)
from .structure import Assignment, Structure, eval_literal, suitable

__version__ = "0.1.0"
