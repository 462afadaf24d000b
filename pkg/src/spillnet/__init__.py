"""Simulator and structural analyzer for R&D-driven growth under
arbitrary cross-technology spillover matrices."""

from .allocation import AllocationShares, compute_shares, market_statics, shares_from_productivities
from .dynamics import (
    ConvergenceResult,
    GrowthSeries,
    Trajectory,
    TransitionEvent,
    detect_convergence,
    detect_transitions,
    growth_series,
    leader_set,
    sector_growth_rate,
    simulate,
)
from .longrun import (
    LongRunSolution,
    RegimePrediction,
    TransitionDesign,
    block_winner,
    construct_transition,
    predict_regime,
    solve_support_system,
)
from .model import (
    DegenerateEconomyError,
    DimensionMismatchError,
    EconomyParams,
    InertTechnologyWarning,
    IntegrationBlowupError,
    MarketStatics,
    Model,
    NegativeProductivityError,
    NonFiniteEntryError,
    NumericalError,
    ParameterRangeError,
    PreconditionError,
    QualityState,
    SpilloverMatrix,
    SpillnetError,
    TransitionSearchExhaustedError,
    ValidationError,
    validate_model,
)
from .scenarios import (
    MissingFieldError,
    RunReport,
    Scenario,
    ScenarioParseError,
    builtin_scenario,
    builtin_scenarios,
    load_scenario,
    run,
    trajectory_csv,
    write_scenario,
)
from .structure import (
    StructureReport,
    adjacency,
    classify,
    closure,
    dominant_eigenvalue_power,
    is_eventually_nonnegative,
    strongly_connected_components,
    topological_order,
    weak_components,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationShares",
    "ConvergenceResult",
    "DegenerateEconomyError",
    "DimensionMismatchError",
    "EconomyParams",
    "GrowthSeries",
    "InertTechnologyWarning",
    "IntegrationBlowupError",
    "LongRunSolution",
    "MarketStatics",
    "MissingFieldError",
    "Model",
    "NegativeProductivityError",
    "NonFiniteEntryError",
    "NumericalError",
    "ParameterRangeError",
    "PreconditionError",
    "QualityState",
    "RegimePrediction",
    "RunReport",
    "Scenario",
    "ScenarioParseError",
    "SpilloverMatrix",
    "SpillnetError",
    "StructureReport",
    "Trajectory",
    "TransitionDesign",
    "TransitionEvent",
    "TransitionSearchExhaustedError",
    "ValidationError",
    "adjacency",
    "block_winner",
    "builtin_scenario",
    "builtin_scenarios",
    "classify",
    "closure",
    "compute_shares",
    "construct_transition",
    "detect_convergence",
    "detect_transitions",
    "dominant_eigenvalue_power",
    "growth_series",
    "is_eventually_nonnegative",
    "leader_set",
    "load_scenario",
    "market_statics",
    "predict_regime",
    "run",
    "sector_growth_rate",
    "shares_from_productivities",
    "simulate",
    "solve_support_system",
    "strongly_connected_components",
    "topological_order",
    "trajectory_csv",
    "validate_model",
    "weak_components",
    "write_scenario",
]
