# src/utils/config_loader.py

import json
import os
from dataclasses import dataclass, fields, replace, asdict
from typing import Dict, Any, Optional

from dotenv import load_dotenv

class ConfigError(Exception):
    """Custom exception for configuration errors"""
    code = "config"

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))),
                                   'config', 'config.json')

# config.json section -> Settings fields it may carry
SECTION_FIELDS = {
    'tolerances': ['tol_herm', 'tol_trace', 'tol_psd', 'tol_num', 'tol_proj', 'tol_comm',
                   'tol_recon', 'tol_intensive', 'tol_effective', 'tol_schmidt', 'tol_pure'],
    'limits': ['max_dim', 'max_cliques', 'search_budget'],
    'sampling': ['stat_threshold', 'batch_size'],
}

INTEGER_FIELDS = {'max_dim', 'max_cliques', 'search_budget', 'batch_size'}


@dataclass(frozen=True)
class Settings:
    """Numerical tolerances and combinatorial limits shared by every module"""
    tol_herm: float = 1e-9
    tol_trace: float = 1e-9
    tol_psd: float = 1e-9
    tol_num: float = 1e-8
    tol_proj: float = 1e-9
    tol_comm: float = 1e-9
    tol_recon: float = 1e-7
    tol_intensive: float = 1e-9
    tol_effective: float = 1e-9
    tol_schmidt: float = 1e-9
    tol_pure: float = 1e-9
    max_dim: int = 64
    max_cliques: int = 100_000
    search_budget: int = 100_000_000
    stat_threshold: float = 0.01
    batch_size: int = 50_000

    def with_overrides(self, overrides: Dict[str, Any]) -> 'Settings':
        """
        Return a copy with the given fields replaced.
        Keys may be given with or without the 'tol_' prefix ('effective' or 'tol_effective').

        Raises: ConfigError for unknown names or invalid values
        """
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        changes = {}
        for key, value in overrides.items():
            name = key.replace('-', '_')
            if name not in known and f"tol_{name}" in known:
                name = f"tol_{name}"
            if name not in known:
                raise ConfigError(f"\nUnknown setting '{key}'")
            changes[name] = _coerce(name, value)
        return replace(self, **changes)

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


DEFAULT_SETTINGS = Settings()


def _coerce(name: str, value: Any):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ConfigError(f"\nSetting '{name}' must be a number, got {value!r}")
    try:
        number = int(value) if name in INTEGER_FIELDS else float(value)
    except ValueError:
        raise ConfigError(f"\nSetting '{name}' must be a number, got {value!r}")
    if number <= 0:
        raise ConfigError(f"\nSetting '{name}' must be positive, got {value!r}")
    return number


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load and validate the configuration file.
    Returns: Dict containing configuration
    Raises: ConfigError if configuration is invalid or missing
    """
    config_path = config_path or DEFAULT_CONFIG_PATH

    # Check if config file exists
    if not os.path.exists(config_path):
        raise ConfigError(
            "\nConfiguration file not found!"
            "\nPlease ensure 'config.json' exists in the 'config' directory."
            "\nPath should be: " + config_path
        )

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)
    except json.JSONDecodeError:
        raise ConfigError(
            "\nInvalid JSON in configuration file!"
            "\nPlease check the syntax of your config.json file."
        )

    for section in list(SECTION_FIELDS) + ['logging']:
        if section not in config:
            raise ConfigError(f"\nMissing '{section}' section in config.json")

    for section, names in SECTION_FIELDS.items():
        for name in config[section]:
            if name not in names:
                raise ConfigError(f"\nUnknown field '{name}' in {section} configuration")
            _coerce(name, config[section][name])

    return config


def settings_from_config(config: Dict[str, Any]) -> Settings:
    """
    Build Settings from a loaded config, then apply environment overrides.
    PSAKIT_MAX_DIM is read from the environment or from a .env file.
    """
    values = {}
    for section in SECTION_FIELDS:
        values.update(config.get(section, {}))
    settings = DEFAULT_SETTINGS.with_overrides(values)

    load_dotenv()
    max_dim = os.environ.get('PSAKIT_MAX_DIM')
    if max_dim:
        settings = settings.with_overrides({'max_dim': max_dim})
    return settings
