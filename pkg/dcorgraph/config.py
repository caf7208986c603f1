"""
Configuration Management
========================

Loads run defaults from a YAML file and validates them with Pydantic.
Command line flags override these values per run. No environment variables
are read: every setting that influences a result is explicit.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class EstimatorConfig(BaseModel):
    """Graph estimator configuration"""
    ridge_step: float = Field(default=1e-8, gt=0, description="First ridge level tried on a singular R")
    ridge_max: float = Field(default=1e-2, gt=0, description="Largest ridge level tried")
    threshold_matrix: Literal["partial", "dcor"] = Field(default="partial", description="Matrix compared to tp")
    path_count: int = Field(default=40, ge=1, description="Thresholds in the automatic path")
    path_min_ratio: float = Field(default=0.05, gt=0, lt=1, description="Smallest path threshold relative to the largest")
    n_jobs: int = Field(default=1, description="Worker threads for the pair loop (-1 for all cores)")

    @field_validator('n_jobs')
    @classmethod
    def validate_n_jobs(cls, v):
        if v == 0 or v < -1:
            raise ValueError("n_jobs must be a positive integer or -1")
        return v

    @model_validator(mode='after')
    def validate_ridge(self):
        if self.ridge_step >= self.ridge_max:
            raise ValueError("ridge_step must be smaller than ridge_max")
        return self


class SimulationConfig(BaseModel):
    """Synthetic data configuration"""
    coef_low: float = Field(default=0.3, gt=0, description="Smallest coefficient magnitude")
    coef_high: float = Field(default=0.9, gt=0, description="Largest coefficient magnitude")
    noise_sd: float = Field(default=1.0, gt=0, description="White-noise standard deviation")
    noise: Literal["gaussian", "uniform"] = Field(default="gaussian", description="White-noise distribution")
    det_distribution: Literal["gaussian", "uniform", "exponential", "all"] = Field(
        default="gaussian", description="Column generator of the determinant experiment"
    )

    @model_validator(mode='after')
    def validate_bounds(self):
        if self.coef_low > self.coef_high:
            raise ValueError("coef_low must not exceed coef_high")
        return self


class DataConfig(BaseModel):
    """CSV input configuration"""
    has_header: bool = Field(default=False, description="First row holds column names")
    delimiter: str = Field(default=",", description="Field delimiter")

    @field_validator('delimiter')
    @classmethod
    def validate_delimiter(cls, v):
        if len(v) != 1:
            raise ValueError("delimiter must be a single character")
        return v


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = Field(default="WARNING", description="Logging level")
    file_path: Optional[str] = Field(default=None, description="Optional log file path")
    max_file_size_mb: int = Field(default=10, ge=1, description="Max log file size in MB")
    backup_count: int = Field(default=3, ge=0, description="Number of log file backups")

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        valid_levels = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
        if v.upper() not in valid_levels:
            raise ValueError(f"Level must be one of: {valid_levels}")
        return v.upper()


class Settings(BaseModel):
    """Main application settings"""
    app_name: str = Field(default="dcorgraph", description="Tool name recorded in summaries")
    app_version: str = Field(default="1.0.0", description="Tool version recorded in summaries")

    estimator: EstimatorConfig = Field(default_factory=EstimatorConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


def load_config_from_yaml(config_path: str = "config.yaml") -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to the YAML config file

    Returns:
        Dict containing configuration data (empty when the file is missing)

    Raises:
        ConfigurationError: If the file is not valid YAML or not a mapping
    """

    config_file = Path(config_path)

    if not config_file.exists():
        logger.info(f"Config file {config_path} not found, using defaults")
        return {}

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        logger.error(f"Error parsing YAML config file: {e}")
        raise ConfigurationError(f"Invalid YAML configuration in {config_path}: {e}")

    if not isinstance(config_data, dict):
        raise ConfigurationError(f"Configuration in {config_path} must be a mapping")

    logger.debug(f"Loaded configuration from {config_path}")
    return config_data


@lru_cache()
def get_settings(config_path: str = "config.yaml") -> Settings:
    """
    Get application settings with caching.

    Args:
        config_path: Path to the YAML configuration file

    Returns:
        Settings: Validated application settings

    Raises:
        ConfigurationError: If the file holds invalid values
    """

    yaml_data = load_config_from_yaml(config_path)

    try:
        settings = Settings(**yaml_data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration in {config_path}: {e.errors()[0]['msg']}")

    return settings


CONFIG_TEMPLATE = """
# Application
app_name: "dcorgraph"
app_version: "1.0.0"

# Graph estimation
estimator:
  ridge_step: 1.0e-8        # first ridge level tried when R is singular
  ridge_max: 1.0e-2         # give up beyond this level
  threshold_matrix: "partial"  # "partial" or "dcor"
  path_count: 40            # thresholds in the automatic path
  path_min_ratio: 0.05      # smallest threshold relative to the largest
  n_jobs: 1                 # worker threads, -1 for all cores

# Synthetic data
simulation:
  coef_low: 0.3
  coef_high: 0.9
  noise_sd: 1.0
  noise: "gaussian"         # "gaussian" or "uniform"
  det_distribution: "gaussian"  # gaussian, uniform, exponential or all

# CSV input
data:
  has_header: false
  delimiter: ","

# Logging Configuration
logging:
  level: "WARNING"
  file_path: null
  max_file_size_mb: 10
  backup_count: 3
"""


def create_config_template(output_path: str = "config.yaml.template") -> None:
    """
    Create a template configuration file.

    Args:
        output_path: Path where to save the template
    """

    with open(output_path, 'w', encoding='utf-8') as f:
        f.write(CONFIG_TEMPLATE.strip() + "\n")

    logger.info(f"Configuration template created at {output_path}")
