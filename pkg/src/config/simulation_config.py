"""
Simulation-specific configuration settings.

Constants of the goodness predicate, the hybrid construction, the Grover
engine and the statistical checks.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SimulationConfig(BaseSettings):
    """
    Numeric and algorithmic constants.

    Every field can be overridden with a SIM_-prefixed environment variable.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SIM_",
        case_sensitive=False,
        extra="ignore"
    )

    # Good profiles: maxload < constant * log n / log log n
    goodness_constant: float = Field(
        default=3.0,
        gt=0.0,
        description="Leading constant of the maxload bound"
    )
    goodness_log_base: float = Field(
        default=2.0,
        gt=1.0,
        description="Logarithm base of the maxload bound"
    )

    # Hybrid construction
    hybrid_exponent: float = Field(
        default=0.6,
        gt=0.0,
        lt=1.0,
        description="Exponent d of the large/small threshold n**d"
    )

    # Grover engine
    bbht_growth: float = Field(
        default=1.2,
        gt=1.0,
        description="Stage growth factor of the unknown-count schedule"
    )
    bbht_early_stop: bool = Field(
        default=False,
        description="Stop once a capped stage has failed instead of spending the whole budget"
    )
    statevector_max_n: int = Field(
        default=4096,
        ge=1,
        description="Largest n simulated with a full amplitude vector"
    )
    norm_tolerance: float = Field(
        default=1e-9,
        gt=0.0,
        description="Allowed drift of the squared norm"
    )
    grover_budget_factor: int = Field(
        default=8,
        ge=1,
        description="Default grover budget is this factor times ceil(n**(1/3))"
    )

    # Statistics
    bias_threshold: float = Field(
        default=0.5,
        gt=0.0,
        lt=1.0,
        description="Bias that defines the threshold budget of a scaling fit"
    )
    confidence_level: float = Field(
        default=0.95,
        gt=0.0,
        lt=1.0,
        description="Confidence level of reported halfwidths"
    )
    ci_target_halfwidth: float = Field(
        default=0.05,
        gt=0.0,
        description="Halfwidth the threshold search sizes its trial counts for"
    )
    chi_square_alpha: float = Field(
        default=0.001,
        gt=0.0,
        lt=1.0,
        description="Significance level of uniformity checks"
    )


# Global configuration instance
simulation_config = SimulationConfig()
