"""COIN partial-offloading simulator: python interface to the C++ core."""

try:
    from ._coinsim import *  # noqa: F401,F403
    from ._coinsim import __doc__ as _core_doc
except ImportError:  # build-tree layout: module sits next to the package on sys.path
    from _coinsim import *  # noqa: F401,F403
    from _coinsim import __doc__ as _core_doc

__all__ = [
    "DataUnit",
    "QueueModel",
    "Destination",
    "EpsilonSchedule",
    "ScenarioConfig",
    "UserSpec",
    "SubtaskSpec",
    "NodeState",
    "Scenario",
    "UnitDecision",
    "StrategyProfile",
    "GameOutcome",
    "SplittingGame",
    "KnapsackInstance",
    "SlotRecord",
    "ExperimentResult",
    "generate_scenario",
    "generate_tasks",
    "local_cost_value",
    "offload_threshold",
    "system_cost",
    "solve_optimal_action",
    "brute_force_action",
    "action_objective",
    "run_experiment",
    "parse_config_text",
]
