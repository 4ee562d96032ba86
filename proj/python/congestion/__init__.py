"""Congestion games with difference rewards and resource abstraction."""

from ._core import (
    ConfigError,
    Experiment,
    FinalPerformance,
    Metrics,
    NetworkOptimum,
    Resource,
    RoadNetwork,
    StripOptimum,
    UtilityKind,
    abstract_reward,
    abstract_reward_curve,
    difference_reward,
    final_performance,
    global_utility,
    load_config,
    local_utility,
    oracle_network_optimum,
    oracle_strip_optimum,
    parse_config,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "Experiment",
    "FinalPerformance",
    "Metrics",
    "NetworkOptimum",
    "Resource",
    "RoadNetwork",
    "StripOptimum",
    "UtilityKind",
    "abstract_reward",
    "abstract_reward_curve",
    "difference_reward",
    "final_performance",
    "global_utility",
    "load_config",
    "local_utility",
    "oracle_network_optimum",
    "oracle_strip_optimum",
    "parse_config",
    "run_experiment",
]
