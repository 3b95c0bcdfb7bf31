"""Configuration modules for the query simulator."""

from .settings import settings, Settings
from .simulation_config import simulation_config, SimulationConfig
from .experiment_config import ExperimentConfig, load_experiment_config

__all__ = [
    "settings",
    "Settings",
    "simulation_config",
    "SimulationConfig",
    "ExperimentConfig",
    "load_experiment_config",
]
