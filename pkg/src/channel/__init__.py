"""
Channel Module

Scenario generation, imperfect field-response information and the
field-response channel model.
"""

from src.channel.field_response import (
    Apv,
    channel_matrix,
    channel_power_gains,
    channel_vector,
    field_response_vector,
    gain_map,
    normalized_cross_correlation,
    phase_difference,
)
from src.channel.scenario import (
    FriErrorModel,
    Scenario,
    ScenarioConfig,
    UserChannelParams,
    db_to_linear,
    dbm_to_watts,
    generate_scenario,
    perturb_fri,
)


__all__ = [
    "Apv",
    "FriErrorModel",
    "Scenario",
    "ScenarioConfig",
    "UserChannelParams",
    "channel_matrix",
    "channel_power_gains",
    "channel_vector",
    "db_to_linear",
    "dbm_to_watts",
    "field_response_vector",
    "gain_map",
    "generate_scenario",
    "normalized_cross_correlation",
    "perturb_fri",
    "phase_difference",
]
