"""Ultra-dense network association/allocation simulator."""

from ._core import (
    ActionOutcome,
    AssociationState,
    ConfigError,
    Environment,
    InterferenceMode,
    SearchSpaceTooLarge,
    Topology,
    Violation,
    apply_action,
    brute_force_optimum,
    config_fields,
    default_config,
    discounted_return,
    generate_topology,
    max_rsrp_policy,
    random_policy,
    run_drop,
    run_experiment,
    user_rates,
    validate,
)

__all__ = [
    "ActionOutcome",
    "AssociationState",
    "ConfigError",
    "Environment",
    "InterferenceMode",
    "SearchSpaceTooLarge",
    "Topology",
    "Violation",
    "apply_action",
    "brute_force_optimum",
    "config_fields",
    "default_config",
    "discounted_return",
    "generate_topology",
    "max_rsrp_policy",
    "random_policy",
    "run_drop",
    "run_experiment",
    "user_rates",
    "validate",
]
